#![allow(dead_code)]

pub mod oracles;

use kgsol::{Grid, SolitonFrame};

pub fn default_grid() -> Grid {
    Grid::new(80.0, 4096).unwrap()
}

pub fn small_grid() -> Grid {
    Grid::new(64.0, 1024).unwrap()
}

pub fn frame(grid: &Grid) -> SolitonFrame {
    SolitonFrame::new(grid)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
