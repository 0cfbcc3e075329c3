#include "gsp/cli.hpp"

int main(int argc, char** argv) { return gsp::run(argc, argv); }
