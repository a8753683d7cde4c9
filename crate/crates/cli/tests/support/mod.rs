//! Fixture table and helpers for driving the `atomkit` binary.
//!
//! Set `ATOMKIT_BLESS=1` to rewrite golden reports from the current build.

#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

pub struct Case {
    /// Golden file stem; also the fixture stem unless `fixture` differs.
    pub name: &'static str,
    pub fixture: &'static str,
    pub command: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, command: &'static str, exit: i32) -> Case {
    Case { name, fixture: name, command, args: &[], exit }
}

pub const CASES: &[Case] = &[
    case("frame_bounds_standard", "frame-bounds", 0),
    case("frame_bounds_mercedes", "frame-bounds", 0),
    case("dual_mercedes", "dual", 0),
    case("reconstruct_complex", "reconstruct", 0),
    case("lframe_audit_deficient", "lframe-audit", 1),
    case("lframe_audit_projection", "lframe-audit", 0),
    case("atomic_build", "atomic-build", 0),
    case("verify_theorem5_pass", "verify-theorem5", 0),
    Case {
        name: "verify_theorem5_pass_samples8",
        fixture: "verify_theorem5_pass",
        command: "verify-theorem5",
        args: &["--samples", "8"],
        exit: 0,
    },
    case("verify_theorem5_deficient", "verify-theorem5", 1),
    case("kernel_eval_bergman", "kernel-eval", 0),
    case("kernel_eval_fock", "kernel-eval", 0),
    case("kernel_eval_weighted", "kernel-eval", 0),
    case("bekolle_ratio_sqrt", "bekolle-ratio", 0),
    case("bekolle_ratio_constant", "bekolle-ratio", 0),
    case("sampling_audit_fock_lattice", "sampling-audit", 0),
    Case {
        name: "sampling_audit_fock_lattice_closed_form",
        fixture: "sampling_audit_fock_lattice",
        command: "sampling-audit",
        args: &["--norm-mode", "closed-form", "--degree", "8"],
        exit: 0,
    },
    case("sampling_audit_single_point", "sampling-audit", 1),
    case("sampling_audit_bergman_radial", "sampling-audit", 0),
    case("sampling_audit_weighted", "sampling-audit", 0),
    case("sample_reconstruct_fock", "sample-reconstruct", 0),
    case("frame_bounds_malformed", "frame-bounds", 2),
    case("frame_bounds_unknown_field", "frame-bounds", 2),
    case("kernel_eval_outside_disc", "kernel-eval", 2),
    case("sampling_audit_dimension_mismatch", "sampling-audit", 2),
    case("bekolle_ratio_divergent", "bekolle-ratio", 3),
    case("kernel_eval_fock_overflow", "kernel-eval", 3),
];

pub struct Run {
    pub exit: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_path(stem: &str) -> PathBuf {
    manifest_dir().join("tests/fixtures").join(format!("{stem}.json"))
}

pub fn golden_path(stem: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{stem}.json"))
}

pub fn run_binary(args: &[&str], stdin: Option<&[u8]>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_atomkit"));
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    let mut child = cmd.spawn().expect("binary starts");
    if let Some(bytes) = stdin {
        child.stdin.take().unwrap().write_all(bytes).unwrap();
    }
    let out = child.wait_with_output().expect("binary finishes");
    Run {
        exit: out.status.code().expect("exited normally"),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn run_case(c: &Case) -> Run {
    let input = fixture_path(c.fixture);
    let mut args = vec![c.command, "--input", input.to_str().unwrap()];
    args.extend_from_slice(c.args);
    run_binary(&args, None)
}

/// Exit code, determinism and golden equality for one case.
pub fn check_case(c: &Case) -> Result<(), String> {
    let first = run_case(c);
    if first.exit != c.exit {
        return Err(format!("{}: exit {} (want {}); stderr: {}", c.name, first.exit, c.exit, first.stderr));
    }
    let second = run_case(c);
    if first.stdout != second.stdout {
        return Err(format!("{}: two runs differ", c.name));
    }
    if c.exit >= 2 {
        if !first.stdout.is_empty() {
            return Err(format!("{}: error exit wrote a report", c.name));
        }
        if first.stderr.trim().is_empty() {
            return Err(format!("{}: error exit without a diagnostic", c.name));
        }
        return Ok(());
    }
    let golden = golden_path(c.name);
    if std::env::var_os("ATOMKIT_BLESS").is_some() {
        std::fs::write(&golden, &first.stdout).map_err(|e| e.to_string())?;
    }
    let want = std::fs::read(&golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    if want != first.stdout {
        return Err(format!("{}: report differs from golden {}", c.name, golden.display()));
    }
    Ok(())
}
