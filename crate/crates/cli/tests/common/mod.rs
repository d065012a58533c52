//! Shared helpers for driving the `tremble` binary in tests.
//!
//! Compiled once per test target; not every target uses every helper.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Workspace { dir: tempfile::tempdir().expect("create temp dir") }
    }

    pub fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).expect("write fixture");
        path
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).expect("read output file")
    }

    /// Run the binary with `args` resolved relative to the workspace.
    pub fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_tremble"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .expect("run tremble")
    }
}

pub fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

pub fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

pub fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

// Common fixture documents.

pub const MATCHING_PENNIES: &str = r#"{"players":2,"actions":[["h","t"],["h","t"]],"payoffs":[[["1","-1"],["-1","1"]],[["-1","1"],["1","-1"]]]}"#;

pub const UNIFORM_2P: &str = r#"{"kind":"mixed","rows":[["1/2","1/2"],["1/2","1/2"]]}"#;

pub const PURE_HH: &str = r#"{"kind":"pure","actions":["h","h"]}"#;

/// Tiny 3-player source: one action each, payoffs (5, 1, 2).
pub const TINY_SOURCE: &str = r#"{"players":3,"actions":[["a0"],["a0"],["a0"]],"payoffs":[[[["5","1","2"]]]],"metadata":{"name":"tiny"}}"#;

/// 2×2×2 game where Player 1 bets on whether Players 2 and 3 mismatch
/// (action 0) or match (action 1); its minmax value is exactly 1/2.
pub const MISMATCH_GAME: &str = r#"{"players":3,"actions":[["m","e"],["x","y"],["x","y"]],"payoffs":[[[["0","0","0"],["1","0","0"]],[["1","0","0"],["0","0","0"]]],[[["1","0","0"],["0","0","0"]],[["0","0","0"],["1","0","0"]]]]}"#;

/// All-⊥ pure profile for a 3-player gadget.
pub const BOT_PROFILE: &str = r#"{"kind":"pure","actions":["_bot","_bot","_bot"]}"#;

/// A tremble direction for 2×2×2 gadgets.
pub const GADGET_TAU: &str = r#"{"kind":"mixed","rows":[["0","1"],["2/5","3/5"],["1/7","6/7"]]}"#;
