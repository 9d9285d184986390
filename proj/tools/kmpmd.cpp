#include "kmpmd/cli.hpp"

int main(int argc, char** argv) { return kmpmd::cli_main(argc, argv); }
