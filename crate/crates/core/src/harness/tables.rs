//! Preconfigured method blocks of the three benchmark tables.

use std::fs;
use std::path::{Path, PathBuf};

use super::config::{ExperimentConfig, Method, Problem};
use super::csv::render_csv;
use super::run::run_experiment;
use crate::error::{Error, Result};

/// One method block of a table: a file stem and its configuration.
#[derive(Debug, Clone)]
pub struct TableBlock {
    pub name: &'static str,
    pub config: ExperimentConfig,
}

fn block(name: &'static str, problem: Problem, method: Method, k: usize, s: usize, n_list: &[usize]) -> TableBlock {
    let mut config = ExperimentConfig::defaults(problem);
    config.method = method;
    config.k = k;
    config.s = s;
    config.n_list = n_list.to_vec();
    TableBlock { name, config }
}

/// Method blocks of table 1 (sine-Gordon), 2 (Schrödinger) or 3 (KdV).
pub fn table_blocks(table: u8) -> Result<Vec<TableBlock>> {
    use Method::*;
    Ok(match table {
        1 => {
            let p = Problem::SineGordon;
            let grid = [1000, 1500, 2000, 2500, 3000];
            vec![
                block("gauss1", p, Gauss, 1, 1, &[2000, 3000, 4000, 5000, 6000]),
                block("gauss2", p, Gauss, 2, 2, &grid),
                block("hbvm4_1", p, Hbvm, 4, 1, &grid),
                block("hbvm4_2", p, Hbvm, 4, 2, &grid),
                block("shbvm", p, Shbvm, 0, 0, &[50, 75, 100]),
            ]
        }
        2 => {
            let p = Problem::Nls;
            let grid = [400, 600, 800, 1000];
            vec![
                block("gauss1", p, Gauss, 1, 1, &grid),
                block("gauss2", p, Gauss, 2, 2, &grid),
                block("hbvm2_1", p, Hbvm, 2, 1, &grid),
                block("hbvm4_2", p, Hbvm, 4, 2, &grid),
                block("shbvm", p, Shbvm, 0, 0, &[50, 75, 100]),
            ]
        }
        3 => {
            let p = Problem::Kdv;
            let grid = [10000, 20000, 30000, 40000, 50000];
            vec![
                block("gauss1", p, Gauss, 1, 1, &grid),
                block("gauss2", p, Gauss, 2, 2, &grid),
                block("hbvm2_1", p, Hbvm, 2, 1, &grid),
                block("hbvm3_2", p, Hbvm, 3, 2, &grid),
                block("shbvm", p, Shbvm, 0, 0, &[400, 600, 800]),
            ]
        }
        other => return Err(Error::InvalidArgument(format!("unknown table {other}; expected 1, 2 or 3"))),
    })
}

/// Run every block of a table and write `table{id}_{block}.csv` into
/// `out_dir`. Returns the written paths in block order.
pub fn reproduce_table(table: u8, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let blocks = table_blocks(table)?;
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::with_capacity(blocks.len());
    for b in blocks {
        let records = run_experiment(&b.config)?;
        let path = out_dir.join(format!("table{table}_{}.csv", b.name));
        fs::write(&path, render_csv(&records))?;
        written.push(path);
    }
    Ok(written)
}
