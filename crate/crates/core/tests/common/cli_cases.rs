//! CLI cases with golden transcripts.
//!
//! Each case runs the `pairframe` binary from the crate root and records
//! exit code, stdout and stderr in `tests/golden/<name>.txt`. Set
//! `UPDATE_GOLDEN=1` to rewrite the transcripts.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    /// Whether the transcript is byte-compared (false for messages that
    /// embed operating-system text).
    pub golden: bool,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case {
        name,
        args,
        exit,
        golden: true,
    }
}

macro_rules! fx {
    ($f:literal) => {
        concat!("tests/fixtures/", $f)
    };
}

pub const CASES: &[Case] = &[
    case(
        "frame_orthonormal",
        &["frame", "analyze", fx!("orthonormal.json")],
        0,
    ),
    case(
        "frame_mercedes",
        &["frame", "analyze", fx!("mercedes.json")],
        0,
    ),
    case(
        "frame_rank_deficient",
        &["frame", "analyze", fx!("rank_deficient.json")],
        0,
    ),
    case("frame_gframe", &["frame", "analyze", fx!("gframe.json")], 0),
    case(
        "frame_mercedes_json",
        &["--format", "json", "frame", "analyze", fx!("mercedes.json")],
        0,
    ),
    case(
        "pair_weighted",
        &["pair", "analyze", fx!("weighted_diagonal.json")],
        0,
    ),
    case("pair_swap", &["pair", "analyze", fx!("swap.json")], 0),
    case(
        "pair_m10",
        &["pair", "analyze", fx!("diagonal_m10.json")],
        0,
    ),
    case("pair_gframe", &["pair", "analyze", fx!("gframe.json")], 0),
    case(
        "pair_weighted_dual",
        &["pair", "analyze", "--dual", fx!("weighted_diagonal.json")],
        0,
    ),
    case(
        "pair_weighted_json",
        &[
            "--format",
            "json",
            "pair",
            "analyze",
            fx!("weighted_diagonal.json"),
        ],
        0,
    ),
    case(
        "neumann_diag13",
        &["neumann", fx!("diag13.json"), "--N", "6"],
        0,
    ),
    case(
        "neumann_identity",
        &["neumann", fx!("identity.json"), "--N", "3"],
        0,
    ),
    case(
        "neumann_mercedes_signal",
        &[
            "neumann",
            fx!("mercedes.json"),
            "--N",
            "2",
            "--signal",
            fx!("signal.json"),
        ],
        0,
    ),
    case(
        "neumann_explicit_alpha",
        &[
            "neumann",
            fx!("diag13.json"),
            "--alpha",
            "0.5+0.1i",
            "--N",
            "4",
        ],
        0,
    ),
    case(
        "neumann_gframe_random",
        &[
            "neumann",
            fx!("gframe.json"),
            "--N",
            "5",
            "--signal",
            "random:7",
        ],
        0,
    ),
    case(
        "neumann_diag13_json",
        &[
            "--format",
            "json",
            "neumann",
            fx!("diag13.json"),
            "--N",
            "3",
        ],
        0,
    ),
    case("dual_orthonormal", &["dual", fx!("orthonormal.json")], 0),
    case("dual_mercedes", &["dual", fx!("mercedes.json")], 0),
    case("dual_gframe", &["dual", fx!("gframe.json")], 0),
    case("gen_mercedes", &["gen", "mercedes"], 0),
    case(
        "gen_orthonormal_4",
        &["gen", "orthonormal", "--dim", "4"],
        0,
    ),
    case(
        "gen_harmonic",
        &["gen", "harmonic", "--dim", "2", "--count", "4"],
        0,
    ),
    case(
        "gen_random_frame",
        &[
            "gen",
            "random-frame",
            "--dim",
            "2",
            "--count",
            "3",
            "--seed",
            "3",
        ],
        0,
    ),
    case(
        "gen_prescribed",
        &[
            "gen",
            "prescribed_spectrum",
            "--dim",
            "2",
            "--count",
            "3",
            "--seed",
            "1",
            "--param",
            "1,4",
        ],
        0,
    ),
    // malformed input: exit 2
    case(
        "err_syntax",
        &["frame", "analyze", fx!("bad_syntax.json")],
        2,
    ),
    case(
        "err_version",
        &["frame", "analyze", fx!("bad_version.json")],
        2,
    ),
    case(
        "err_both_encodings",
        &["pair", "analyze", fx!("bad_both.json")],
        2,
    ),
    case("err_unknown_kind", &["gen", "nope"], 2),
    case(
        "err_gen_spec",
        &["gen", "orthonormal", "--dim", "2", "--count", "3"],
        2,
    ),
    case("err_prescribed_missing", &["gen", "prescribed_spectrum"], 2),
    case(
        "err_alpha",
        &["neumann", fx!("diag13.json"), "--alpha", "half"],
        2,
    ),
    case(
        "err_tol",
        &["--tol", "2", "frame", "analyze", fx!("mercedes.json")],
        2,
    ),
    Case {
        name: "err_missing_file",
        args: &["frame", "analyze", fx!("does_not_exist.json")],
        exit: 2,
        golden: false,
    },
    // dimension mismatch: exit 3
    case("err_width", &["frame", "analyze", fx!("bad_width.json")], 3),
    case(
        "err_weights",
        &["pair", "analyze", fx!("bad_weights.json")],
        3,
    ),
    case(
        "err_gamma_dim",
        &["pair", "analyze", fx!("bad_gamma_dim.json")],
        3,
    ),
    case(
        "err_signal_len",
        &[
            "neumann",
            fx!("identity.json"),
            "--signal",
            fx!("signal.json"),
        ],
        3,
    ),
    // not invertible: exit 4
    case(
        "err_dual_not_frame",
        &["dual", fx!("rank_deficient.json")],
        4,
    ),
    case(
        "err_neumann_not_near",
        &["neumann", fx!("rank_deficient.json")],
        4,
    ),
    case(
        "err_pair_dual_singular",
        &["pair", "analyze", "--dual", fx!("diagonal_m10.json")],
        4,
    ),
];

pub fn crate_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pairframe"));
    cmd.current_dir(crate_root()).env("PAIRFRAME_THREADS", "2");
    cmd
}

pub struct Outcome {
    pub exit: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

pub fn run(args: &[&str]) -> Outcome {
    let out = binary().args(args).output().expect("spawn pairframe");
    Outcome {
        exit: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

fn transcript(o: &Outcome) -> Vec<u8> {
    let mut t = format!("exit: {}\n--- stdout\n", o.exit).into_bytes();
    t.extend_from_slice(&o.stdout);
    t.extend_from_slice(b"--- stderr\n");
    t.extend_from_slice(&o.stderr);
    t
}

fn golden_path(name: &str) -> PathBuf {
    crate_root()
        .join("tests/golden")
        .join(format!("{name}.txt"))
}

/// Runs one case; `Err` describes the first mismatch.
pub fn check(case: &Case) -> Result<(), String> {
    let o = run(case.args);
    if o.exit != case.exit {
        return Err(format!(
            "{}: exit {} (expected {}), stderr: {}",
            case.name,
            o.exit,
            case.exit,
            String::from_utf8_lossy(&o.stderr)
        ));
    }
    if !case.golden {
        return Ok(());
    }
    let actual = transcript(&o);
    let path = golden_path(case.name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let expected = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != actual {
        return Err(format!(
            "{}: transcript differs from {}\n--- actual\n{}",
            case.name,
            path.display(),
            String::from_utf8_lossy(&actual)
        ));
    }
    Ok(())
}

/// Every case, collecting failures.
pub fn check_all() -> Vec<String> {
    CASES.iter().filter_map(|c| check(c).err()).collect()
}

/// `gen` with the same arguments twice yields identical bytes, and stdout
/// matches the `--out` file.
pub fn gen_determinism(dir: &Path) -> Result<(), String> {
    let runs: [&[&str]; 4] = [
        &[
            "gen",
            "random_frame",
            "--dim",
            "3",
            "--count",
            "5",
            "--seed",
            "11",
        ],
        &[
            "gen",
            "random_gframe",
            "--dim",
            "3",
            "--count",
            "4",
            "--seed",
            "12",
        ],
        &[
            "gen",
            "prescribed_spectrum",
            "--dim",
            "3",
            "--seed",
            "13",
            "--param",
            "1,2,3",
        ],
        &["gen", "harmonic", "--dim", "3", "--count", "7"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = run(args);
        let second = run(args);
        if first.exit != 0 || first.stdout != second.stdout {
            return Err(format!("{args:?}: output not reproducible"));
        }
        let file = dir.join(format!("gen{i}.json"));
        let file_str = file.to_str().expect("utf-8 temp path");
        let mut with_out: Vec<&str> = args.to_vec();
        with_out.extend(["--out", file_str]);
        let o = run(&with_out);
        let written = std::fs::read(&file).map_err(|e| e.to_string())?;
        if o.exit != 0 || written != first.stdout {
            return Err(format!("{args:?}: --out file differs from stdout"));
        }
    }
    Ok(())
}
