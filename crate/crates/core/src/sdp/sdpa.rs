//! SDPA sparse format in its equality (dual) reading: maximise `tr(F_0 Y)`
//! subject to `tr(F_k Y) = c_k`, `Y ⪰ 0` block diagonal. Each constraint of
//! the instance becomes one native equality row.
//!
//! A listed off-diagonal entry `(i, j, v)` also fills `(j, i)`, so it
//! contributes `2v · Y[i,j]` to the trace; coefficients are halved on export
//! and doubled on import. Halving is exact in binary floating point.

use std::fmt::Write as _;

use super::{BlockKind, SdpInstance, Term};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpaEntry {
    /// 0 for the objective, `k ≥ 1` for constraint `k`.
    pub matrix: usize,
    /// 1-based.
    pub block: usize,
    /// 1-based, `row ≤ col`.
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpaProblem {
    pub header: Vec<String>,
    pub block_names: Vec<String>,
    /// Negative sizes denote diagonal blocks.
    pub block_sizes: Vec<i64>,
    pub rhs: Vec<f64>,
    pub entries: Vec<SdpaEntry>,
}

impl SdpaProblem {
    pub fn constraint_count(&self) -> usize {
        self.rhs.len()
    }

    fn terms_of(&self, matrix: usize, sign: f64) -> Vec<Term> {
        let mut terms: Vec<Term> = self
            .entries
            .iter()
            .filter(|e| e.matrix == matrix)
            .map(|e| Term {
                block: e.block - 1,
                row: e.row - 1,
                col: e.col - 1,
                coeff: sign * if e.row == e.col { e.value } else { 2.0 * e.value },
            })
            .collect();
        terms.sort_by(term_order);
        terms
    }

    /// Constraints in entry-coefficient form, terms sorted by `(block, row, col)`.
    pub fn constraints(&self) -> Vec<(Vec<Term>, f64)> {
        let mut per: Vec<Vec<Term>> = vec![Vec::new(); self.rhs.len()];
        for e in self.entries.iter().filter(|e| e.matrix > 0) {
            let coeff = if e.row == e.col { e.value } else { 2.0 * e.value };
            per[e.matrix - 1].push(Term { block: e.block - 1, row: e.row - 1, col: e.col - 1, coeff });
        }
        per.into_iter()
            .zip(&self.rhs)
            .map(|(mut t, &c)| {
                t.sort_by(term_order);
                (t, c)
            })
            .collect()
    }

    /// The minimisation objective, i.e. `−F_0` in entry-coefficient form.
    pub fn objective(&self) -> Vec<Term> {
        self.terms_of(0, -1.0)
    }
}

fn term_order(a: &Term, b: &Term) -> std::cmp::Ordering {
    (a.block, a.row, a.col).cmp(&(b.block, b.row, b.col))
}

fn halve(t: &Term) -> f64 {
    if t.row == t.col {
        t.coeff
    } else {
        t.coeff / 2.0
    }
}

pub fn export_sdpa(inst: &SdpInstance) -> SdpaProblem {
    let header = vec![
        format!("sequential query program: n={} T={} dimension={}", inst.n, inst.queries, 1usize << inst.n),
        "maximize tr(F0 Y) subject to tr(Fk Y) = ck, Y psd block diagonal".into(),
        "objective F0 = -epsilon; off-diagonal coefficients are halved".into(),
    ];
    let block_names = inst.blocks.iter().map(|b| b.name.clone()).collect();
    let block_sizes = inst
        .blocks
        .iter()
        .map(|b| match b.kind {
            BlockKind::Psd => b.size as i64,
            BlockKind::Diagonal => -(b.size as i64),
        })
        .collect();
    let mut entries = Vec::new();
    let mut push = |matrix: usize, terms: &[Term], sign: f64| {
        let mut sorted = terms.to_vec();
        sorted.sort_by(term_order);
        for t in &sorted {
            entries.push(SdpaEntry {
                matrix,
                block: t.block + 1,
                row: t.row + 1,
                col: t.col + 1,
                value: sign * halve(t),
            });
        }
    };
    push(0, &inst.objective, -1.0);
    for (k, c) in inst.constraints.iter().enumerate() {
        push(k + 1, &c.terms, 1.0);
    }
    SdpaProblem { header, block_names, block_sizes, rhs: inst.constraints.iter().map(|c| c.rhs).collect(), entries }
}

pub fn render_sdpa(p: &SdpaProblem) -> String {
    let mut s = String::with_capacity(32 * p.entries.len() + 1024);
    for h in &p.header {
        let _ = writeln!(s, "* {h}");
    }
    for (k, (name, size)) in p.block_names.iter().zip(&p.block_sizes).enumerate() {
        let _ = writeln!(s, "* block {}: {} ({})", k + 1, name, size);
    }
    let _ = writeln!(s, "{}", p.rhs.len());
    let _ = writeln!(s, "{}", p.block_sizes.len());
    let sizes: Vec<String> = p.block_sizes.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(s, "{}", sizes.join(" "));
    let rhs: Vec<String> = p.rhs.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "{}", rhs.join(" "));
    for e in &p.entries {
        let _ = writeln!(s, "{} {} {} {} {}", e.matrix, e.block, e.row, e.col, e.value);
    }
    s
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|ch: char| ch.is_whitespace() || matches!(ch, ',' | '{' | '}' | '(' | ')')).filter(|t| !t.is_empty())
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

/// Parses SDPA sparse text. Block names are recovered from `* block k: name`
/// header lines when present and default to `block_k`.
pub fn parse_sdpa(text: &str) -> Result<SdpaProblem> {
    let mut header = Vec::new();
    let mut named: Vec<(usize, String)> = Vec::new();
    let mut body: Vec<(usize, &str)> = Vec::new();
    let mut in_header = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if in_header && (line.starts_with('*') || line.starts_with('"')) {
            let rest = line[1..].trim();
            if let Some(b) = rest.strip_prefix("block ") {
                if let Some((k, tail)) = b.split_once(':') {
                    if let Ok(k) = k.trim().parse::<usize>() {
                        let name = tail.split_whitespace().next().unwrap_or("").to_string();
                        named.push((k, name));
                        continue;
                    }
                }
            }
            header.push(rest.to_string());
            continue;
        }
        in_header = false;
        body.push((idx + 1, line));
    }
    let mut lines = body.into_iter();
    let mut next = |what: &str| lines.next().ok_or_else(|| Error::parse(0, format!("missing {what}")));

    let (ln, l) = next("constraint count")?;
    let m: usize = parse_num(tokens(l).next().unwrap_or(""), ln, "constraint count")?;
    let (ln, l) = next("block count")?;
    let nblocks: usize = parse_num(tokens(l).next().unwrap_or(""), ln, "block count")?;
    let (ln, l) = next("block sizes")?;
    let block_sizes = tokens(l).map(|t| parse_num::<i64>(t, ln, "block size")).collect::<Result<Vec<_>>>()?;
    if block_sizes.len() != nblocks || block_sizes.contains(&0) {
        return Err(Error::parse(ln, format!("expected {nblocks} nonzero block sizes")));
    }
    let mut rhs = Vec::with_capacity(m);
    let mut last = ln;
    while rhs.len() < m {
        let (ln, l) = next("right-hand side")?;
        for t in tokens(l) {
            rhs.push(parse_num::<f64>(t, ln, "right-hand side")?);
        }
        last = ln;
    }
    if rhs.len() != m {
        return Err(Error::parse(last, format!("expected {m} right-hand side values, got {}", rhs.len())));
    }
    let mut entries = Vec::new();
    for (ln, l) in lines {
        let t: Vec<&str> = tokens(l).collect();
        if t.len() != 5 {
            return Err(Error::parse(ln, "entry needs five fields"));
        }
        let e = SdpaEntry {
            matrix: parse_num(t[0], ln, "matrix number")?,
            block: parse_num(t[1], ln, "block number")?,
            row: parse_num(t[2], ln, "row")?,
            col: parse_num(t[3], ln, "column")?,
            value: parse_num(t[4], ln, "value")?,
        };
        if e.matrix > m || e.block == 0 || e.block > nblocks {
            return Err(Error::parse(ln, "matrix or block number out of range"));
        }
        let size = block_sizes[e.block - 1].unsigned_abs() as usize;
        if e.row == 0 || e.col == 0 || e.row > size || e.col > size {
            return Err(Error::parse(ln, "entry outside its block"));
        }
        if block_sizes[e.block - 1] < 0 && e.row != e.col {
            return Err(Error::parse(ln, "off-diagonal entry in a diagonal block"));
        }
        let (row, col) = if e.row <= e.col { (e.row, e.col) } else { (e.col, e.row) };
        entries.push(SdpaEntry { row, col, ..e });
    }
    let mut block_names: Vec<String> = (1..=nblocks).map(|k| format!("block_{k}")).collect();
    for (k, name) in named {
        if (1..=nblocks).contains(&k) && !name.is_empty() {
            block_names[k - 1] = name;
        }
    }
    Ok(SdpaProblem { header, block_names, block_sizes, rhs, entries })
}
