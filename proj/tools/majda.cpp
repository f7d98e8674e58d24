#include "majda/cli.hpp"

int main(int argc, char** argv)
{
    return majda::cli_main(argc, argv);
}
