#include "runner.hpp"

int main(int argc, char** argv) { return dimfree::cli::cli_main(argc, argv); }
