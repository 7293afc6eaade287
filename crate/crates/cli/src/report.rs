//! Grid-search reports as JSON (full grid, per-repeat values, selection)
//! and CSV (one row per cell).

use cart_elc_core::evaluation::{CvCell, CvReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDoc {
    pub r: usize,
    pub depth: usize,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub mean_size: f64,
    pub std_size: f64,
    pub repeat_accuracies: Vec<f64>,
    pub repeat_sizes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selected {
    pub r: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub algorithm: String,
    pub criterion: String,
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
    pub grid_r_max: usize,
    pub grid_depth_max: usize,
    pub selected: Selected,
    pub cells: Vec<CellDoc>,
}

impl ReportDoc {
    pub fn from_report(report: &CvReport) -> Self {
        Self {
            algorithm: report.algorithm.name().to_string(),
            criterion: report.criterion.name().to_string(),
            folds: report.cv.folds,
            repeats: report.cv.repeats,
            seed: report.cv.seed,
            grid_r_max: report.cv.grid_r_max,
            grid_depth_max: report.cv.grid_depth_max,
            selected: Selected {
                r: report.selected.0,
                depth: report.selected.1,
            },
            cells: report.cells.iter().map(cell_doc).collect(),
        }
    }

    pub fn selected_cell(&self) -> Option<&CellDoc> {
        self.cells
            .iter()
            .find(|c| c.r == self.selected.r && c.depth == self.selected.depth)
    }

    pub fn to_json(&self) -> Vec<u8> {
        crate::json::to_bytes(self)
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["r", "depth", "mean_acc", "std_acc", "mean_size", "std_size"])
            .expect("in-memory write");
        for c in &self.cells {
            w.write_record([
                c.r.to_string(),
                c.depth.to_string(),
                c.mean_accuracy.to_string(),
                c.std_accuracy.to_string(),
                c.mean_size.to_string(),
                c.std_size.to_string(),
            ])
            .expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

fn cell_doc(c: &CvCell) -> CellDoc {
    CellDoc {
        r: c.r,
        depth: c.depth,
        mean_accuracy: c.mean_accuracy,
        std_accuracy: c.std_accuracy,
        mean_size: c.mean_size,
        std_size: c.std_size,
        repeat_accuracies: c.outcome.accuracies.clone(),
        repeat_sizes: c.outcome.sizes.clone(),
    }
}
