// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end; everything goes through the C API.
#include <hyplab/hyplab.h>

int main(int argc, char** argv)
{
    return hyplab_main(argc - 1, argv + 1);
}
