#include "qrp/cli.hpp"

int main(int argc, char** argv) { return qrp::cli::run(argc, argv); }
