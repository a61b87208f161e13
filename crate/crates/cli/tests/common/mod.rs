#![allow(dead_code)]

use std::process::{Command, Output};

pub fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["zetaform"];
    argv.extend_from_slice(args);
    let code = zetaform_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaform")).args(args).output().expect("binary runs")
}
