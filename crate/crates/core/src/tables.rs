//! Left strain `Γ_l` of the impact shock tabulated against the
//! dimensionless impact parameter `Ṽ₀ = ρ₀V₀²/μ`, for `μ = ρ₀ = 1` and
//! `λ = 2β`.

use std::fmt::Write as _;

use crate::constitutive::{ModelKind, ModelSpec};
use crate::shock::solve_rankine_hugoniot;
use crate::{Real, Result};

pub const DEFAULT_BETAS: [f64; 4] = [0.25, 0.5, 2.0, 5.0];
pub const DEFAULT_V0_TILDES: [f64; 7] = [0.1, 0.25, 0.5, 2.0, 4.0, 10.0, 40.0];
pub const DEFAULT_FS: [f64; 2] = [0.25, 0.5];

/// Decimals printed for the Ogden column and for every other column.
pub const OGDEN_DIGITS: usize = 4;
pub const DEFAULT_DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec<T> {
    pub betas: Vec<T>,
    pub v0_tildes: Vec<T>,
    /// Blatz-Ko mixing fractions, one column each.
    pub fs: Vec<T>,
}

impl<T: Real> Default for TableSpec<T> {
    fn default() -> Self {
        TableSpec {
            betas: DEFAULT_BETAS.iter().map(|&b| T::lit(b)).collect(),
            v0_tildes: DEFAULT_V0_TILDES.iter().map(|&v| T::lit(v)).collect(),
            fs: DEFAULT_FS.iter().map(|&f| T::lit(f)).collect(),
        }
    }
}

/// One material column of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Column<T> {
    Ogden,
    KirchhoffModified,
    BlatzKo { f: T },
}

impl<T: Real> Column<T> {
    pub fn name(&self) -> String {
        match self {
            Column::Ogden => "ogden".into(),
            Column::KirchhoffModified => "m_kirchhoff".into(),
            Column::BlatzKo { f } => format!("blatzko_f{}", f.to_string().replace('.', "")),
        }
    }

    pub fn default_digits(&self) -> usize {
        match self {
            Column::Ogden => OGDEN_DIGITS,
            _ => DEFAULT_DIGITS,
        }
    }

    pub fn model(&self, beta: T) -> Result<ModelSpec<T>> {
        match *self {
            Column::Ogden => ModelSpec::from_beta(ModelKind::Ogden, beta, None),
            Column::KirchhoffModified => ModelSpec::from_beta(ModelKind::KirchhoffModified, beta, None),
            Column::BlatzKo { f } => ModelSpec::from_beta(ModelKind::BlatzKoOgden, beta, Some(f)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow<T> {
    pub v0_tilde: T,
    /// `None` where the solver failed; the reason is in [`Table::notes`].
    pub cells: Vec<Option<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    pub beta: T,
    pub columns: Vec<Column<T>>,
    pub rows: Vec<TableRow<T>>,
    pub notes: Vec<String>,
}

/// `Γ_l` for one material at `Ṽ₀`, i.e. `V₀ = √Ṽ₀` with `μ = ρ₀ = 1`.
pub fn left_strain<T: Real>(column: Column<T>, beta: T, v0_tilde: T) -> Result<T> {
    let model = column.model(beta)?;
    Ok(solve_rankine_hugoniot(&model, v0_tilde.sqrt())?.gamma_l)
}

pub fn build_tables<T: Real>(spec: &TableSpec<T>) -> Vec<Table<T>> {
    let mut columns = vec![Column::Ogden, Column::KirchhoffModified];
    columns.extend(spec.fs.iter().map(|&f| Column::BlatzKo { f }));

    spec.betas
        .iter()
        .map(|&beta| {
            let mut notes = Vec::new();
            let rows = spec
                .v0_tildes
                .iter()
                .map(|&v0_tilde| {
                    let cells = columns
                        .iter()
                        .map(|&col| match left_strain(col, beta, v0_tilde) {
                            Ok(g) => Some(g),
                            Err(e) => {
                                notes.push(format!(
                                    "beta={beta} v0_tilde={v0_tilde} {}: {e}",
                                    col.name()
                                ));
                                None
                            }
                        })
                        .collect();
                    TableRow { v0_tilde, cells }
                })
                .collect();
            Table { beta, columns: columns.clone(), rows, notes }
        })
        .collect()
}

/// One CSV for all tables: `beta,v0_tilde,<columns...>`. Each column is
/// printed with its default number of decimals unless `digits` is given.
pub fn render_csv<T: Real>(tables: &[Table<T>], digits: Option<usize>) -> String {
    let mut out = String::new();
    if let Some(first) = tables.first() {
        out.push_str("beta,v0_tilde");
        for c in &first.columns {
            out.push(',');
            out.push_str(&c.name());
        }
        out.push('\n');
    }
    for table in tables {
        for row in &table.rows {
            let _ = write!(out, "{},{}", table.beta, row.v0_tilde);
            for (col, cell) in table.columns.iter().zip(&row.cells) {
                out.push(',');
                if let Some(v) = cell {
                    let d = digits.unwrap_or_else(|| col.default_digits());
                    let _ = write!(out, "{v:.d$}");
                }
            }
            out.push('\n');
        }
    }
    out
}
