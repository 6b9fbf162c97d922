//! Text format for finite graded calculi.
//!
//! ```text
//! # comment
//! degrees 2 2            # dimension of each degree, starting at 0
//! differential 0         # d_0 : Ω⁰ → Ω¹, followed by dims[1] rows of dims[0] entries
//! -1 1
//! 1 -1
//! product 0 1            # followed by dims[p+q] rows of dims[p]·dims[q] entries
//! ...
//! gram 1                 # followed by dims[k] rows of dims[k] entries
//! 2 0
//! 0 1
//! ```
//!
//! Entries use the scalar syntax of the algebra format (`1/2+3/4i`). Every
//! differential `d_0 … d_{N−1}` is required; a missing Gram matrix defaults to
//! the identity; product tables are optional.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::GradedCalculus;
use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, GaussRat};

enum Block {
    Differential(usize),
    Product(usize, usize),
    Gram(usize),
}

struct Pending {
    block: Block,
    rows: usize,
    cols: usize,
    data: Vec<Vec<GaussRat>>,
    line: usize,
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

fn number(tok: (usize, &str), line: usize) -> Result<usize> {
    tok.1
        .parse()
        .map_err(|_| Error::parse(line, tok.0, format!("expected a nonnegative integer, found `{}`", tok.1)))
}

pub fn parse_graded_calculus(text: &str) -> Result<GradedCalculus> {
    let mut dims: Option<Vec<usize>> = None;
    let mut differentials: BTreeMap<usize, ExactMatrix> = BTreeMap::new();
    let mut products = BTreeMap::new();
    let mut grams: BTreeMap<usize, ExactMatrix> = BTreeMap::new();
    let mut pending: Option<Pending> = None;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let toks = tokens(raw.split('#').next().unwrap_or(""));
        let Some(&head) = toks.first() else {
            continue;
        };
        if let Some(p) = pending.as_mut() {
            if toks.len() != p.cols {
                return Err(Error::parse(
                    line,
                    head.0,
                    format!("row needs {} entries, found {}", p.cols, toks.len()),
                ));
            }
            let row = toks
                .iter()
                .map(|&(c, t)| {
                    t.parse::<GaussRat>()
                        .map_err(|_| Error::parse(line, c, format!("malformed scalar `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            p.data.push(row);
            if p.data.len() == p.rows {
                let done = pending.take().expect("present");
                let m = if done.rows == 0 {
                    ExactMatrix::zeros(0, done.cols)
                } else {
                    ExactMatrix::from_dense(&done.data)?
                };
                match done.block {
                    Block::Differential(k) => {
                        differentials.insert(k, m);
                    }
                    Block::Product(p, q) => {
                        products.insert((p, q), m);
                    }
                    Block::Gram(k) => {
                        grams.insert(k, m);
                    }
                }
            }
            continue;
        }
        let need_dims = |dims: &Option<Vec<usize>>| {
            dims.clone()
                .ok_or_else(|| Error::parse(line, head.0, "`degrees` must come first"))
        };
        let arg = |i: usize| {
            toks.get(i)
                .copied()
                .ok_or_else(|| Error::parse(line, head.0, format!("`{}` is missing an argument", head.1)))
        };
        let check_degree = |dims: &[usize], tok: (usize, &str), k: usize| {
            if k >= dims.len() {
                Err(Error::parse(line, tok.0, format!("degree {k} is above the top degree {}", dims.len() - 1)))
            } else {
                Ok(())
            }
        };
        let (block, rows, cols) = match head.1 {
            "degrees" => {
                if dims.is_some() {
                    return Err(Error::parse(line, head.0, "`degrees` given twice"));
                }
                if toks.len() < 2 {
                    return Err(Error::parse(line, head.0, "`degrees` needs at least one dimension"));
                }
                dims = Some(toks[1..].iter().map(|&t| number(t, line)).collect::<Result<_>>()?);
                continue;
            }
            "differential" => {
                let dims = need_dims(&dims)?;
                let k = number(arg(1)?, line)?;
                check_degree(&dims, arg(1)?, k + 1)?;
                (Block::Differential(k), dims[k + 1], dims[k])
            }
            "product" => {
                let dims = need_dims(&dims)?;
                let p = number(arg(1)?, line)?;
                let q = number(arg(2)?, line)?;
                check_degree(&dims, arg(2)?, p + q)?;
                (Block::Product(p, q), dims[p + q], dims[p] * dims[q])
            }
            "gram" => {
                let dims = need_dims(&dims)?;
                let k = number(arg(1)?, line)?;
                check_degree(&dims, arg(1)?, k)?;
                (Block::Gram(k), dims[k], dims[k])
            }
            other => return Err(Error::parse(line, head.0, format!("unknown keyword `{other}`"))),
        };
        if rows == 0 {
            let m = ExactMatrix::zeros(0, cols);
            match block {
                Block::Differential(k) => differentials.insert(k, m),
                Block::Product(p, q) => products.insert((p, q), m),
                Block::Gram(k) => grams.insert(k, m),
            };
        } else {
            pending = Some(Pending {
                block,
                rows,
                cols,
                data: Vec::new(),
                line,
            });
        }
    }
    let last = text.lines().count().max(1);
    if let Some(p) = pending {
        return Err(Error::parse(p.line, 1, "matrix block ends before all rows were given"));
    }
    let dims = dims.ok_or_else(|| Error::parse(last, 1, "missing `degrees`"))?;
    let top = dims.len() - 1;
    let differentials = (0..top)
        .map(|k| {
            differentials
                .remove(&k)
                .ok_or_else(|| Error::parse(last, 1, format!("missing differential {k}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let grams = (0..=top)
        .map(|k| grams.remove(&k).unwrap_or_else(|| ExactMatrix::identity(dims[k])))
        .collect();
    GradedCalculus::new(dims, differentials, products, grams)
}

impl GradedCalculus {
    /// Serializes in the format read by [`parse_graded_calculus`].
    pub fn to_text(&self) -> String {
        fn block(out: &mut String, header: String, m: &ExactMatrix) {
            out.push_str(&header);
            out.push('\n');
            for i in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols())
                    .map(|j| {
                        let v = m.get(i, j);
                        if v.is_zero() { "0".to_string() } else { v.to_string() }
                    })
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        let mut out = String::from("degrees");
        for d in self.dims() {
            out.push_str(&format!(" {d}"));
        }
        out.push('\n');
        for k in 0..self.top_degree() {
            block(&mut out, format!("differential {k}"), self.differential(k).expect("k < top"));
        }
        for (&(p, q), m) in self.products() {
            block(&mut out, format!("product {p} {q}"), m);
        }
        for k in 0..=self.top_degree() {
            block(&mut out, format!("gram {k}"), self.gram(k));
        }
        out
    }
}
