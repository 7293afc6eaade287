//! Dataset preparation presets for the benchmark files.

use std::str::FromStr;

use cart_elc_core::data::{mean_impute, remove_rows_missing};
use cart_elc_core::{Algorithm, Dataset};

use crate::error::{CliError, Result};
use crate::table::{LabelColumn, Table};

/// Cut point between the two housing classes, in dollars.
pub const HOUSING_THRESHOLD: f64 = 21_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preset {
    /// Labels from `--label-column`, no preprocessing.
    #[default]
    None,
    /// Label column `species`.
    Iris,
    /// Label column `Class`; rows missing `Bare Nuclei` are dropped.
    Cancer,
    /// `MEDV` split at 21,000 into two classes.
    Housing,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(Preset::None),
            "iris" => Ok(Preset::Iris),
            "cancer" => Ok(Preset::Cancer),
            "housing" => Ok(Preset::Housing),
            _ => Err(format!("unknown preset {s:?} (expected none, iris, cancer or housing)")),
        }
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::None => "none",
            Preset::Iris => "iris",
            Preset::Cancer => "cancer",
            Preset::Housing => "housing",
        }
    }

    /// Builds the dataset `algorithm` will train on.
    ///
    /// With a preset, algorithms that cannot route missing cells get
    /// column means in their place; CART-ELC keeps the gaps.
    pub fn prepare(self, table: &Table, label: Option<&str>, algorithm: Algorithm) -> Result<Dataset> {
        let explicit = label.map(LabelColumn::parse);
        let dataset = match self {
            Preset::None => table.to_dataset(&explicit.unwrap_or(LabelColumn::Last))?,
            Preset::Iris => table.to_dataset(&explicit.unwrap_or(LabelColumn::Named("species".into())))?,
            Preset::Cancer => {
                let d = table.to_dataset(&explicit.unwrap_or(LabelColumn::Named("Class".into())))?;
                remove_rows_missing(&d, "Bare Nuclei")?
            }
            Preset::Housing => table.to_discretized_dataset(
                &explicit.unwrap_or(LabelColumn::Named("MEDV".into())),
                HOUSING_THRESHOLD,
            )?,
        };
        if self != Preset::None && !algorithm.accepts_missing() && dataset.has_missing() {
            return mean_impute(&dataset).map_err(CliError::from);
        }
        Ok(dataset)
    }
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;

    fn table(text: &str) -> Table {
        Table::from_bytes(Path::new("t.csv"), text.as_bytes()).unwrap()
    }

    #[test]
    fn cancer_drops_rows_missing_bare_nuclei() {
        let t = table("Clump,Bare Nuclei,Class\n1,?,2\n2,3,4\n?,1,2\n");
        let d = Preset::Cancer.prepare(&t, None, Algorithm::CartElc).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.get(1, 0), None);
        let d = Preset::Cancer.prepare(&t, None, Algorithm::HhcartD).unwrap();
        assert_eq!(d.get(1, 0), Some(2.0));
    }

    #[test]
    fn housing_discretizes_and_imputes_for_baselines_only() {
        let t = table("a,MEDV\n1,21000\nNA,20999.5\n3,50000\n");
        let d = Preset::Housing.prepare(&t, None, Algorithm::CartElc).unwrap();
        assert_eq!(d.labels(), &[1, 0, 1]);
        assert!(d.has_missing());
        let d = Preset::Housing.prepare(&t, None, Algorithm::CartAxis).unwrap();
        assert_eq!(d.get(1, 0), Some(2.0));
    }

    #[test]
    fn plain_input_keeps_missing_cells() {
        let t = table("a,y\nNA,p\n1,q\n");
        let d = Preset::None.prepare(&t, None, Algorithm::CartAxis).unwrap();
        assert!(d.has_missing());
        assert!("bogus".parse::<Preset>().is_err());
        assert_eq!("iris".parse::<Preset>().unwrap().name(), "iris");
    }
}
