// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "probcert/cli/cli.hpp"

int main(int argc, char** argv) { return probcert::cli::main(argc, argv); }
