#include "d2dcoex/cli.hpp"

int main(int argc, char** argv) { return d2dcoex::cli::parse_and_dispatch(argc, argv); }
