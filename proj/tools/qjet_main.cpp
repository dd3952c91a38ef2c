#include "qjet/io.hpp"

int main(int argc, char** argv) { return qjet::io::run_cli(argc, argv); }
