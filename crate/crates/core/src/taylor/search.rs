use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::cancel::{solve_cancellation_with, CancellationOptions, CancellationSolution};
use super::series::ExpansionParams;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Subsets to examine before stopping with a resume token.
    pub max_subsets: Option<u64>,
    /// Lexicographic subset index to start from.
    pub resume_from: u64,
    pub options: CancellationOptions,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_subsets: None,
            resume_from: 0,
            options: CancellationOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub solutions: Vec<CancellationSolution>,
    pub total_subsets: u64,
    pub subsets_examined: u64,
    /// Index of the first unexamined subset when a limit stopped the search.
    pub resume_token: Option<u64>,
}

const CHUNK: usize = 2048;

fn choose(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// `index`-th k-subset of `0..n` in lexicographic order.
fn unrank(mut index: u64, n: u64, k: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k as usize);
    let mut next = 0u64;
    for slot in 0..k {
        loop {
            let rest = choose(n - next - 1, k - slot - 1).unwrap_or(u64::MAX);
            if index < rest {
                break;
            }
            index -= rest;
            next += 1;
        }
        out.push(next as usize);
        next += 1;
    }
    out
}

fn advance(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Runs `solve_cancellation` over every k-subset of the integer grid
/// `u_range x v_range`, in lexicographic order of subsets of the grid sorted by `(u, v)`.
pub fn search_params(
    d: u32,
    k: usize,
    u_range: RangeInclusive<i64>,
    v_range: RangeInclusive<i64>,
    limits: &SearchLimits,
) -> Result<SearchOutcome> {
    if k < 2 {
        return Err(Error::invalid("k must be >= 2"));
    }
    let mut grid = Vec::new();
    for u in u_range {
        for v in v_range.clone() {
            grid.push(ExpansionParams::integer(d, u, v)?);
        }
    }
    let n = grid.len();
    let total = choose(n as u64, k as u64).ok_or_else(|| Error::invalid("subset count overflows"))?;
    let mut out = SearchOutcome {
        solutions: Vec::new(),
        total_subsets: total,
        subsets_examined: 0,
        resume_token: None,
    };
    if limits.resume_from >= total {
        return Ok(out);
    }
    let stop = match limits.max_subsets {
        Some(m) => total.min(limits.resume_from.saturating_add(m)),
        None => total,
    };
    let mut current = unrank(limits.resume_from, n as u64, k as u64);
    let mut index = limits.resume_from;
    let mut more = true;
    while more && index < stop {
        let mut chunk = Vec::with_capacity(CHUNK);
        while more && index < stop && chunk.len() < CHUNK {
            chunk.push(current.clone());
            index += 1;
            more = advance(&mut current, n);
        }
        let found: Vec<Vec<CancellationSolution>> = chunk
            .par_iter()
            .map(|subset| {
                let params: Vec<ExpansionParams> = subset.iter().map(|&i| grid[i].clone()).collect();
                solve_cancellation_with(d, &params, limits.options)
            })
            .collect::<Result<_>>()?;
        out.subsets_examined += chunk.len() as u64;
        out.solutions.extend(found.into_iter().flatten());
    }
    if index < total {
        out.resume_token = Some(index);
    }
    Ok(out)
}
