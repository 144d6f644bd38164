//! Published reference values, embedded from `data/reference_table.csv`.

const FIXTURE: &str = include_str!("../data/reference_table.csv");

/// One published `(N, a^2)` case with the Rayleigh numbers reported by
/// three methods. Only `ra_legendre` is a reproduction target; the other
/// two columns are comparison data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub heating: f64,
    pub a2: f64,
    pub ra_fourier: f64,
    pub ra_variational: f64,
    pub ra_legendre: f64,
}

/// The fourteen published rows, in printed order.
pub fn reference_rows() -> Vec<ReferenceRow> {
    FIXTURE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse().expect("fixture holds plain decimals"))
                .collect();
            ReferenceRow {
                heating: v[0],
                a2: v[1],
                ra_fourier: v[2],
                ra_variational: v[3],
                ra_legendre: v[4],
            }
        })
        .collect()
}
