//! Exhaustive Ball-Rivoal scans, written as append-only JSON Lines.
//!
//! Tuples run over `N` ascending, then `u`, then `v` in lexicographic order,
//! with `u_i, v_i >= 1` and `u_i + v_i <= N + 1` (only `v_i = N + 1 - 2 u_i`
//! with `--well-poised`). Batches are evaluated in parallel and written in
//! that order, so the output does not depend on `--jobs`. An existing output
//! file is checked against the same order and the scan resumes after its last
//! complete line.

use std::fs::{self, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Args;
use itertools::Itertools;

use crate::records::ScanRecord;
use crate::{Failure, EXIT_OK};

pub const MAX_SCAN_N: usize = 8;
pub const MAX_SCAN_POLE_ORDER: u32 = 24;
const BATCH_PER_JOB: usize = 32;

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Dimension of the forms.
    #[arg(long)]
    pub n: usize,
    /// Largest pole order.
    #[arg(long = "max-N")]
    pub max_n: u32,
    /// Smallest pole order.
    #[arg(long = "min-N", default_value_t = 1)]
    pub min_n: u32,
    /// Only tuples with 2 u_i + v_i = N + 1.
    #[arg(long = "well-poised")]
    pub well_poised: bool,
    /// Output file; records are appended and an interrupted scan resumes.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

pub type Tuple = (u32, Vec<u32>, Vec<u32>);

/// All parameter tuples of the scan, in output order.
pub fn tuples(n: usize, min_n: u32, max_n: u32, well_poised: bool) -> impl Iterator<Item = Tuple> {
    (min_n..=max_n).flat_map(move |big_n| {
        let per_u: Box<dyn Iterator<Item = Tuple>> = if well_poised {
            Box::new(
                (0..n)
                    .map(|_| 1..=big_n / 2)
                    .multi_cartesian_product()
                    .map(move |u| {
                        let v = u.iter().map(|&a| big_n + 1 - 2 * a).collect();
                        (big_n, u, v)
                    }),
            )
        } else {
            Box::new((0..n).map(|_| 1..=big_n).multi_cartesian_product().flat_map(move |u| {
                let vs = u.iter().map(|&a| 1..=big_n + 1 - a).multi_cartesian_product();
                vs.map(move |v| (big_n, u.clone(), v))
            }))
        };
        per_u
    })
}

fn evaluate_batch(batch: &[Tuple], jobs: usize) -> Result<Vec<String>, Failure> {
    let eval = |t: &Tuple| -> Result<String, Failure> {
        let rec = ScanRecord::evaluate(&t.1, &t.2, t.0)?;
        serde_json::to_string(&rec).map_err(|e| Failure::Io(e.to_string()))
    };
    if jobs <= 1 || batch.len() <= 1 {
        return batch.iter().map(eval).collect();
    }
    let chunk = batch.len().div_ceil(jobs);
    let parts: Vec<Result<Vec<String>, Failure>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            batch.chunks(chunk).map(|c| s.spawn(move || c.iter().map(eval).collect())).collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(batch.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Number of records already present; drops a trailing partial line.
fn resume(path: &PathBuf, expected: &mut dyn Iterator<Item = Tuple>, err: &mut dyn Write) -> Result<usize, Failure> {
    let text = fs::read_to_string(path)?;
    let complete = text.rfind('\n').map_or(0, |i| i + 1);
    if complete < text.len() {
        let f = OpenOptions::new().write(true).open(path)?;
        f.set_len(complete as u64)?;
        writeln!(err, "scan: dropped an incomplete last line from {}", path.display())?;
    }
    let mut count = 0;
    for (i, line) in text[..complete].lines().enumerate() {
        let rec: ScanRecord = serde_json::from_str(line)
            .map_err(|e| Failure::Usage(format!("{}:{}: not a scan record: {e}", path.display(), i + 1)))?;
        let mismatch = || {
            Failure::Usage(format!(
                "{}:{}: existing output does not match this scan's parameters",
                path.display(),
                i + 1
            ))
        };
        let t = expected.next().ok_or_else(mismatch)?;
        if rec.key() != (t.0, t.1.as_slice(), t.2.as_slice()) {
            return Err(mismatch());
        }
        count += 1;
    }
    Ok(count)
}

pub fn run_scan(a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    if a.n == 0 || a.n > MAX_SCAN_N {
        return Err(Failure::Usage(format!("--n must be between 1 and {MAX_SCAN_N}")));
    }
    if a.min_n == 0 || a.min_n > a.max_n || a.max_n > MAX_SCAN_POLE_ORDER {
        return Err(Failure::Usage(format!("need 1 <= --min-N <= --max-N <= {MAX_SCAN_POLE_ORDER}")));
    }
    let jobs = match a.jobs {
        Some(0) => return Err(Failure::Usage("--jobs must be positive".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |p| p.get()),
    };
    let mut pending = tuples(a.n, a.min_n, a.max_n, a.well_poised);
    let mut file_sink;
    let sink: &mut dyn Write = match &a.out {
        Some(path) => {
            let done = if path.exists() { resume(path, &mut pending, err)? } else { 0 };
            if done > 0 {
                writeln!(err, "scan: resuming after {done} existing records")?;
            }
            let f = OpenOptions::new().create(true).append(true).open(path)?;
            file_sink = BufWriter::new(f);
            &mut file_sink
        }
        None => out,
    };
    let batch_size = BATCH_PER_JOB * jobs;
    let mut written = 0usize;
    loop {
        let batch: Vec<Tuple> = pending.by_ref().take(batch_size).collect();
        if batch.is_empty() {
            break;
        }
        for line in evaluate_batch(&batch, jobs)? {
            writeln!(sink, "{line}")?;
        }
        sink.flush()?;
        written += batch.len();
    }
    writeln!(err, "scan: wrote {written} records")?;
    Ok(EXIT_OK)
}
