use crate::analysis::{subdiff_partial, Expr, PiecewiseFn, SubdiffSet};
use crate::geometry::{Point, VPolytope};

/// The bifunction `φ(x, y)` in one of its specialised forms.
#[derive(Clone, Debug)]
pub enum Bifunction {
    /// `f(y) − f(x)`.
    Mp(PiecewiseFn),
    /// `⟨F(x), y − x⟩`.
    Vip(Vec<Expr>),
    /// `ϕ(y₁, x₂) − ϕ(x₁, y₂)` with `x₁ = x[..split]`.
    Spp { varphi: PiecewiseFn, split: usize },
    /// `Σᵢ fᵢ(x with xᵢ replaced by yᵢ) − fᵢ(x)`; player `i` owns coordinate `i`.
    Nep { players: Vec<PiecewiseFn> },
    /// An expression over `(x, y)`: variables `0..n` are `x`, `n..2n` are `y`.
    General(Expr),
}

impl Bifunction {
    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        let n = x.len();
        match self {
            Bifunction::Mp(f) => f.value(y.as_slice()) - f.value(x.as_slice()),
            Bifunction::Vip(field) => field.iter().enumerate().map(|(i, e)| e.eval(x.as_slice()) * (y[i] - x[i])).sum(),
            Bifunction::Spp { varphi, split } => {
                let mut a = y.clone();
                a.rows_mut(*split, n - split).copy_from(&x.rows(*split, n - split));
                let mut b = x.clone();
                b.rows_mut(*split, n - split).copy_from(&y.rows(*split, n - split));
                varphi.value(a.as_slice()) - varphi.value(b.as_slice())
            }
            Bifunction::Nep { players } => players
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let mut z = x.clone();
                    z[i] = y[i];
                    f.value(z.as_slice()) - f.value(x.as_slice())
                })
                .sum(),
            Bifunction::General(e) => {
                let xy: Vec<f64> = x.iter().chain(y.iter()).cloned().collect();
                e.eval(&xy)
            }
        }
    }

    /// `∂_y φ(x, x)`.
    pub fn diag_subdiff(&self, x: &Point) -> SubdiffSet {
        let n = x.len();
        match self {
            Bifunction::Mp(f) => f.subdiff(x),
            Bifunction::Vip(field) => {
                VPolytope::singleton(Point::from_iterator(n, field.iter().map(|e| e.eval(x.as_slice()))))
            }
            Bifunction::Spp { varphi, split } => {
                let first = subdiff_partial(varphi, x, 0..*split);
                let second = subdiff_partial(varphi, x, *split..n).negate();
                first.product(&second).pruned()
            }
            Bifunction::Nep { players } => {
                let mut acc: Option<VPolytope> = None;
                for (i, f) in players.iter().enumerate() {
                    let part = subdiff_partial(f, x, i..i + 1);
                    acc = Some(match acc {
                        None => part,
                        Some(a) => a.product(&part),
                    });
                }
                acc.expect("at least one player").pruned()
            }
            Bifunction::General(e) => {
                let xx: Vec<f64> = x.iter().chain(x.iter()).cloned().collect();
                let g = e.grad(&xx);
                VPolytope::singleton(Point::from_vec(g[n..2 * n].to_vec()))
            }
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Bifunction::Mp(_) => Kind::Mp,
            Bifunction::Vip(_) => Kind::Vip,
            Bifunction::Spp { .. } => Kind::Spp,
            Bifunction::Nep { .. } => Kind::Nep,
            Bifunction::General(_) => Kind::Generic,
        }
    }
}

/// Problem class tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Generic,
    Mp,
    Vip,
    Spp,
    Nep,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Generic => "generic",
            Kind::Mp => "MP",
            Kind::Vip => "VIP",
            Kind::Spp => "SPP",
            Kind::Nep => "NEP",
        }
    }
}
