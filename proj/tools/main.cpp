#include "lchzk/cli.hpp"

int main(int argc, char** argv) { return lchzk::run_cli(argc, argv); }
