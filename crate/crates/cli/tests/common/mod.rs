#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn geovec<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_geovec"))
        .args(args)
        .output()
        .expect("spawn geovec");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// One `$ args` block of a fixture with its recorded stdout and exit code.
pub struct Case {
    pub args: String,
    pub stdout: String,
    pub code: Option<i32>,
}

pub fn parse_fixture(text: &str) -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    for line in text.lines() {
        if let Some(args) = line.strip_prefix("$ ") {
            cases.push(Case {
                args: args.to_string(),
                stdout: String::new(),
                code: None,
            });
        } else if let Some(c) = line.strip_prefix("[exit ").and_then(|r| r.strip_suffix(']')) {
            cases.last_mut().expect("exit line after a command").code = Some(c.parse().expect("exit code"));
        } else if let Some(case) = cases.last_mut() {
            if case.code.is_none() {
                case.stdout.push_str(line);
                case.stdout.push('\n');
            }
        }
    }
    cases
}

pub fn render_fixture(cases: &[Case]) -> String {
    let mut s = String::new();
    for c in cases {
        s.push_str(&format!(
            "$ {}\n{}[exit {}]\n",
            c.args,
            c.stdout,
            c.code.expect("recorded")
        ));
    }
    s
}

/// Run every case of `expected/<stem>.txt` against `<stem>.alg`. Returns
/// mismatching commands. With `GEOVEC_BLESS` set the fixture is rewritten
/// instead.
pub fn check_fixture(stem: &str) -> Vec<String> {
    let path = corpus(&format!("expected/{stem}.txt"));
    let text = std::fs::read_to_string(&path).expect("fixture");
    let input = corpus(&format!("{stem}.alg"));
    let mut cases = parse_fixture(&text);
    let mut bad = Vec::new();
    for case in &mut cases {
        let mut args = shlex::split(&case.args).expect("fixture command quoting");
        args.extend(["--input".to_string(), input.display().to_string()]);
        let run = geovec(&args);
        if std::env::var_os("GEOVEC_BLESS").is_some() {
            case.stdout = run.stdout;
            case.code = Some(run.code);
        } else if case.code != Some(run.code) || case.stdout != run.stdout {
            bad.push(format!(
                "{stem}: {} (exit {}, stderr {:?})",
                case.args, run.code, run.stderr
            ));
        }
    }
    if std::env::var_os("GEOVEC_BLESS").is_some() {
        std::fs::write(&path, render_fixture(&cases)).expect("write fixture");
    }
    bad
}

pub const CORPUS: [&str; 5] = ["su2_abc", "su2su2_d", "solv2", "heis3", "sym_pair"];
