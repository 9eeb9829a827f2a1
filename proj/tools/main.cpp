#include "collective/cli.hpp"

int main(int argc, char** argv) { return collective::cli::parse_and_dispatch(argc, argv); }
