#include "rcip/cli.hpp"

int main(int argc, char** argv) { return rcip::cli::run_main(argc, argv); }
