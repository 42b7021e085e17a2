//! Coefficient tables behind the `table` subcommand, with byte-stable
//! CSV, JSON, and text rendering.

use ordhom_core::downset::downsets_within;
use ordhom_core::families::{
    ballot_coeff, cnck_a_vector, diamond_coeffs, h_cnck, hc2ck_coeffs, lambda_coeffs,
    ChainProductEngine,
};
use ordhom_core::{ElementSet, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        // numbers stay decimal strings so arbitrary precision survives
        let value = serde_json::json!({
            "columns": self.columns,
            "rows": self.rows,
        });
        let mut out = serde_json::to_string_pretty(&value).expect("tables serialize");
        out.push('\n');
        out
    }

    fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{:>w$}", c, w = widths[i]));
        }
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{:>w$}", cell, w = widths[i]));
            }
            out.push('\n');
        }
        out
    }
}

pub const MAX_TABLE_K: usize = 60;
pub const MAX_TABLE_N: usize = 20;

/// h and the per-down-set coefficients of C_n x C_k, one row per (n, k, j).
pub fn cnck_table(n_max: usize, k_max: usize) -> Table {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for k in 1..=k_max {
            let a = cnck_a_vector(n, k);
            let h = h_cnck(n, k);
            for (j, coeff) in a.iter().enumerate() {
                rows.push(vec![
                    n.to_string(),
                    k.to_string(),
                    j.to_string(),
                    coeff.to_string(),
                    h.to_string(),
                ]);
            }
        }
    }
    Table { columns: vec!["n", "k", "j", "a", "h"], rows }
}

pub fn lambda_table(k_max: usize) -> Table {
    let rows = (1..=k_max)
        .map(|k| {
            let c = lambda_coeffs(k);
            vec![
                k.to_string(),
                c.a_empty.to_string(),
                c.a_side.to_string(),
                c.a_side.to_string(),
                c.a_pair.to_string(),
                c.a_full.to_string(),
                c.h.to_string(),
            ]
        })
        .collect();
    Table { columns: vec!["k", "a_empty", "a_l", "a_r", "a_lr", "a_full", "h"], rows }
}

pub fn diamond_table(k_max: usize) -> Table {
    let rows = (1..=k_max)
        .map(|k| {
            let c = diamond_coeffs(k);
            vec![
                k.to_string(),
                c.a_empty.to_string(),
                c.a_bot.to_string(),
                c.a_bot_side.to_string(),
                c.a_bot_side.to_string(),
                c.a_bot_pair.to_string(),
                c.a_full.to_string(),
                c.h.to_string(),
            ]
        })
        .collect();
    Table {
        columns: vec!["k", "a_empty", "a_bot", "a_botl", "a_botr", "a_botlr", "a_full", "h"],
        rows,
    }
}

pub fn hc2ck_table(k_max: usize) -> Table {
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let coeffs = hc2ck_coeffs(k);
        let h: num_bigint::BigUint = coeffs.iter().sum();
        for (j, a) in coeffs.iter().enumerate() {
            rows.push(vec![k.to_string(), j.to_string(), a.to_string(), h.to_string()]);
        }
    }
    Table { columns: vec!["k", "j", "a", "h"], rows }
}

pub fn polycoeffs_table(k_max: usize) -> Table {
    let mut rows = Vec::new();
    for k in 1..=k_max as u64 {
        for i in 0..=k {
            rows.push(vec![k.to_string(), i.to_string(), ballot_coeff(k, i).to_string()]);
        }
    }
    Table { columns: vec!["k", "i", "coeff"], rows }
}

/// h(W x C_k) and #D(W x C_k) for every induced up-set W of the 3x3
/// grid, the sub-posets the grid recursion steps through. Up-sets are
/// identified by their decimal bitmask over the grid's row-major ids.
pub fn c3c3grid_table(k_max: usize) -> Table {
    let grid = Poset::product(&Poset::chain(3), &Poset::chain(3)).unwrap();
    let mut upsets: Vec<ElementSet> = downsets_within(&grid, grid.carrier(), 1 << 10)
        .unwrap()
        .into_iter()
        .map(|d| grid.carrier().difference(d))
        .collect();
    upsets.sort_by_key(|u| (u.len(), u.bits()));

    let mut engine = ChainProductEngine::new(&grid);
    let mut rows = Vec::new();
    for &w in &upsets {
        for k in 1..=k_max {
            let table = engine.coefficient_table_of(w, k).unwrap();
            let h = table.h();
            let d = table.get(w).cloned().unwrap_or_else(|| 1u32.into());
            rows.push(vec![
                w.bits().to_string(),
                w.len().to_string(),
                k.to_string(),
                h.to_string(),
                d.to_string(),
            ]);
        }
    }
    Table { columns: vec!["w", "size", "k", "h", "downsets"], rows }
}
