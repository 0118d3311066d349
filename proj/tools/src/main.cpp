#include "gratinguq_cli/commands.hpp"

int main(int argc, char** argv)
{
    return gratinguq::cli::run_cli(argc, argv);
}
