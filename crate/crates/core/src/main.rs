// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(catkerr::cli::run(std::env::args_os()));
}
