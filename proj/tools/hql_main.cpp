#include "hql/cli.hpp"

int main(int argc, char** argv) { return hql::cli::run(argc, argv); }
