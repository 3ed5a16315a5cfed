//! Truth-table text format: `n=<arity>` on the first line, then `2^n`
//! characters of `0`/`1` in lexicographic input order (`x_1` most significant).

use super::{BooleanFunction, TruthTable};
use crate::{Error, Result};

pub fn parse_truth_table(text: &str) -> Result<BooleanFunction> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::parse(1, "empty truth-table file"))?;
    let arity: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::parse(1, format!("expected `n=<arity>`, found {header:?}")))?;
    if arity == 0 || arity > super::DEFAULT_TABLE_LIMIT {
        return Err(Error::parse(1, format!("arity {arity} outside 1..={}", super::DEFAULT_TABLE_LIMIT)));
    }
    let body = lines.next().ok_or_else(|| Error::parse(2, "missing truth-table line"))?;
    if lines.next().is_some() {
        return Err(Error::parse(3, "trailing content after the truth table"));
    }
    let bits = super::parse_bits(body).map_err(|_| Error::parse(2, "truth table must contain only 0 and 1"))?;
    let table = TruthTable::from_bits(arity, &bits)
        .ok_or_else(|| Error::parse(2, format!("expected {} entries, found {}", 1usize << arity, bits.len())))?;
    BooleanFunction::from_table(table)
}

pub fn write_truth_table(f: &BooleanFunction) -> Result<String> {
    let table = f.table()?;
    let mut out = format!("n={}\n", f.arity());
    out.extend(table.iter().map(|b| if b { '1' } else { '0' }));
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = parse_truth_table("n=2\n0110\n").unwrap();
        assert!(f.eval(&[false, true]).unwrap());
        assert!(!f.eval(&[true, true]).unwrap());
        assert_eq!(write_truth_table(&f).unwrap(), "n=2\n0110\n");
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "n=2", "m=2\n0110", "n=2\n011", "n=2\n01a0", "n=0\n0", "n=2\n0110\n1"] {
            assert!(matches!(parse_truth_table(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }
}
