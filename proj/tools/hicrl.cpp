#include "hicrl/cli.hpp"

int main(int argc, char** argv) { return hicrl::dispatch_argv(argc, argv); }
