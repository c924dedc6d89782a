#include "mplv/cli.hpp"

int main(int argc, char** argv) { return mplv::cli_main(argc, argv); }
