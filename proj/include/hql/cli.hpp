#pragma once

namespace hql::cli {

/// Exit code taxonomy, stable across commands:
///   0 success, 1 checks ran but failed (verify/liouville),
///   2 usage or config error, 3 domain/precondition error,
///   4 solver failure.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitSolver = 4;

/// Full command-line front end:
///   hql verify|solve|liouville|interior --config <path> --out <dir> [--seed <u64>]
/// Outputs are written atomically (write-then-rename) into the --out
/// directory; identical config + seed reproduce identical bytes.
int run(int argc, const char* const* argv);

}  // namespace hql::cli
