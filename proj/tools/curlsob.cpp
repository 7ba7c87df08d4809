#include "curlsob/commands.hpp"

int main(int argc, char** argv) { return curlsob::cli_main(argc, argv); }
