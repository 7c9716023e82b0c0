#include "speiser_lab/cli.h"

int main(int argc, char** argv) { return speiser_lab::run_command(argc, argv); }
