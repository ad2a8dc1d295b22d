// SPDX-License-Identifier: Apache-2.0
use clap::Parser;

fn main() {
    let cli = cli::Cli::parse();
    let out = cli::run(&cli);
    if !out.stdout.is_empty() {
        println!("{}", out.stdout);
    }
    if !out.stderr.is_empty() {
        eprintln!("{}", out.stderr);
    }
    std::process::exit(out.code);
}
