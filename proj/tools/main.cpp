#include "mscat/cli.hpp"

int main(int argc, char** argv) { return mscat::cli::dispatch(argc, argv); }
