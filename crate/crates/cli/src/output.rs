//! Output formatting and file handling.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::Failure;

/// Format a float with 9 significant digits; infinities print as
/// `inf`/`-inf` rather than poisoning CSV consumers with empty cells.
pub fn sig9(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.8e}")
    }
}

/// Write to the path, or standard output when none is given.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, content)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(content.as_bytes())
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(2.0 / 1681.0), "1.18976800e-3");
        assert_eq!(sig9(-1.55208), "-1.55208000e0");
        assert_eq!(sig9(f64::NEG_INFINITY), "-inf");
        assert_eq!(sig9(0.0), "0.00000000e0");
    }
}
