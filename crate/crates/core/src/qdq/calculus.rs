//! Sums, products and compositions of certificates, plus the matching
//! target maps.

use serde::{Deserialize, Serialize};

use super::certificate::{vec_norm, Family, QdqCertificate};
use crate::error::{Error, Result};
use crate::geometry::{LinearMap, Modulus, OperatorSet};
use crate::mapping::Mapping;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CombineKind {
    /// `αF + βG`.
    Linear { alpha: f64, beta: f64 },
    /// `x ↦ (F(x), G(x))`.
    SetProduct,
    /// `F·G` with `F` scalar.
    ScalarProduct,
}

fn same_base(f: &QdqCertificate, g: &QdqCertificate) -> Result<()> {
    if f.x_bar.len() != g.x_bar.len() {
        return Err(Error::dim(f.x_bar.len(), g.x_bar.len()));
    }
    let gap = f.x_bar.iter().zip(&g.x_bar).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > 1e-12 {
        return Err(Error::Argument(format!("certificates are based at different points (gap {gap:e})")));
    }
    Ok(())
}

fn add_budgets(a: Option<(f64, f64)>, b: Option<(f64, f64)>, ca: f64, cb: f64) -> Option<(f64, f64)> {
    match (a, b) {
        (Some((al, ah)), Some((bl, bh))) => Some((ca * al + cb * bl, ca * ah + cb * bh)),
        _ => None,
    }
}

/// Combines two certificates based at the same point.
pub fn combine_certificates(kind: CombineKind, f: &QdqCertificate, g: &QdqCertificate) -> Result<QdqCertificate> {
    same_base(f, g)?;
    let gamma = f.gamma.intersect(&g.gamma).map_err(|e| match e {
        Error::UnsupportedGamma { kind, .. } => Error::Argument(format!("cannot intersect gamma sets of kind {kind}")),
        other => other,
    })?;
    let delta_star = f.delta_star.min(g.delta_star);
    let (ff, gf) = (f.family.clone(), g.family.clone());
    let (rf, rg) = (f.rho.clone(), g.rho.clone());
    match kind {
        CombineKind::Linear { alpha, beta } => {
            if f.output_dim() != g.output_dim() {
                return Err(Error::Argument(format!(
                    "linear combination needs a shared codomain, got {} and {}",
                    f.output_dim(),
                    g.output_dim()
                )));
            }
            let lambda = f.lambda.scale(alpha).minkowski_sum(&g.lambda.scale(beta))?;
            let y_bar = f.y_bar.iter().zip(&g.y_bar).map(|(a, b)| alpha * a + beta * b).collect();
            let (aa, ab) = (alpha.abs(), beta.abs());
            let rho = Modulus::new(
                format!("{aa}*({}) + {ab}*({})", rf.label(), rg.label()),
                move |d| aa * rf.eval(d) + ab * rg.eval(d),
            );
            let (f2, g2) = (ff.clone(), gf.clone());
            let family = Family::new(
                move |d, x| {
                    let (lf, hf) = ff.eval(d, x);
                    let (lg, hg) = gf.eval(d, x);
                    let l = lf.scale(alpha).add(&lg.scale(beta)).expect("shapes checked");
                    let h = hf.iter().zip(&hg).map(|(a, b)| alpha * a + beta * b).collect();
                    (l, h)
                },
                move |d| add_budgets(f2.budget(d), g2.budget(d), aa, ab),
            );
            QdqCertificate::new(f.x_bar.clone(), y_bar, gamma, lambda, delta_star, rho, family)
        }
        CombineKind::SetProduct => {
            let lambda = f.lambda.stacked(&g.lambda)?;
            let y_bar = f.y_bar.iter().chain(&g.y_bar).copied().collect();
            let rho = Modulus::new(format!("({}) + ({})", rf.label(), rg.label()), move |d| {
                rf.eval(d) + rg.eval(d)
            });
            let (f2, g2) = (ff.clone(), gf.clone());
            let family = Family::new(
                move |d, x| {
                    let (lf, hf) = ff.eval(d, x);
                    let (lg, hg) = gf.eval(d, x);
                    (lf.stack(&lg).expect("shapes checked"), hf.into_iter().chain(hg).collect())
                },
                move |d| add_budgets(f2.budget(d), g2.budget(d), 1.0, 1.0),
            );
            QdqCertificate::new(f.x_bar.clone(), y_bar, gamma, lambda, delta_star, rho, family)
        }
        CombineKind::ScalarProduct => {
            if f.output_dim() != 1 {
                return Err(Error::Argument(format!(
                    "scalar product needs a scalar first factor, got dimension {}",
                    f.output_dim()
                )));
            }
            let yf = f.y_bar[0];
            let yg = g.y_bar.clone();
            let yg_norm = vec_norm(&yg);
            let yg_col = LinearMap::column(&yg);
            let lambda = g
                .lambda
                .scale(yf)
                .minkowski_sum(&OperatorSet::compose(&OperatorSet::singleton(yg_col.clone()), &f.lambda)?)?;
            let y_bar = yg.iter().map(|v| yf * v).collect();
            let (mf, mg) = (f.lambda.max_norm(), g.lambda.max_norm());
            let rho = {
                let (rf, rg) = (rf.clone(), rg.clone());
                Modulus::new(format!("product of ({}) and ({})", rf.label(), rg.label()), move |d| {
                    let (a, b) = (rf.eval(d), rg.eval(d));
                    yf.abs() * b + yg_norm * a + d * (mf + 2.0 * a) * (mg + 2.0 * b)
                })
            };
            let x_bar = f.x_bar.clone();
            let (f2, g2) = (ff.clone(), gf.clone());
            let family = Family::new(
                move |d, x| {
                    let (lf, hf) = ff.eval(d, x);
                    let (lg, hg) = gf.eval(d, x);
                    let dx: Vec<f64> = x.iter().zip(&x_bar).map(|(a, b)| a - b).collect();
                    let af = lf.apply(&dx)[0] + hf[0];
                    let ag: Vec<f64> = lg.apply(&dx).iter().zip(&hg).map(|(a, b)| a + b).collect();
                    let l = lg.scale(yf).add(&yg_col.compose(&lf).expect("shapes checked")).expect("shapes checked");
                    let h = hg
                        .iter()
                        .zip(&yg)
                        .zip(&ag)
                        .map(|((hg, yg), ag)| yf * hg + yg * hf[0] + af * ag)
                        .collect();
                    (l, h)
                },
                move |d| {
                    let (fl, fh) = f2.budget(d)?;
                    let (gl, gh) = g2.budget(d)?;
                    let (a, b) = (rf.eval(d), rg.eval(d));
                    let lip_af = mf + a + fl * d + fh;
                    let lip_ag = mg + b + gl * d + gh;
                    let size_af = d * (mf + 2.0 * a);
                    let size_ag = d * (mg + 2.0 * b);
                    Some((
                        yf.abs() * gl + yg_norm * fl,
                        yf.abs() * gh + yg_norm * fh + size_af * lip_ag + size_ag * lip_af,
                    ))
                },
            );
            QdqCertificate::new(f.x_bar.clone(), y_bar, gamma, lambda, delta_star, rho, family)
        }
    }
}

/// The certificate of `G ∘ F` from certificates of `F` at `x̄` and of `G`
/// at `F(x̄)`.
///
/// With `M = max{|Λ_F|, |Λ_G|, 1}` the composite at parameter `d` uses
/// `F` at `d` and `G` at `3Md`, and
/// `ρ(d) = M[ρ_F(d) + 3ρ_G(3Md)] + ρ_F(d)ρ_G(3Md)`.
/// The caller asserts that `F` maps `(x̄ + Γ_F)` near `x̄` into `F(x̄) + Γ_G`.
pub fn compose_certificates(f: &QdqCertificate, g: &QdqCertificate) -> Result<QdqCertificate> {
    if f.output_dim() != g.input_dim() {
        return Err(Error::dim(g.input_dim(), f.output_dim()));
    }
    let gap = f.y_bar.iter().zip(&g.x_bar).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > 1e-12 {
        return Err(Error::Argument(format!(
            "inner certificate ends at a different point than the outer one starts (gap {gap:e})"
        )));
    }
    let big_m = f.lambda.max_norm().max(g.lambda.max_norm()).max(1.0);
    let lambda = OperatorSet::compose(&g.lambda, &f.lambda)?;
    let mut delta_star = f.delta_star.min(g.delta_star / (3.0 * big_m));
    let mut halvings = 0;
    while f.rho.eval(delta_star) > big_m {
        delta_star /= 2.0;
        halvings += 1;
        if halvings > 60 {
            return Err(Error::Argument("inner modulus never drops below the composition bound".into()));
        }
    }
    let (rf, rg) = (f.rho.clone(), g.rho.clone());
    let rho = {
        let (rf, rg) = (rf.clone(), rg.clone());
        Modulus::new(format!("chain of ({}) and ({})", rf.label(), rg.label()), move |d| {
            let a = rf.eval(d);
            let b = rg.eval(3.0 * big_m * d);
            big_m * (a + 3.0 * b) + a * b
        })
    };
    let (ff, gf) = (f.family.clone(), g.family.clone());
    let (f2, g2) = (ff.clone(), gf.clone());
    let (x_bar, y_mid) = (f.x_bar.clone(), f.y_bar.clone());
    let family = Family::new(
        move |d, x| {
            let (lf, hf) = ff.eval(d, x);
            let dx: Vec<f64> = x.iter().zip(&x_bar).map(|(a, b)| a - b).collect();
            let xi: Vec<f64> = lf.apply(&dx).iter().zip(&hf).zip(&y_mid).map(|((a, b), y)| y + a + b).collect();
            let (lg, hg) = gf.eval(3.0 * big_m * d, &xi);
            let l = lg.compose(&lf).expect("shapes checked");
            let h = lg.apply(&hf).iter().zip(&hg).map(|(a, b)| a + b).collect();
            (l, h)
        },
        move |d| {
            let dg = 3.0 * big_m * d;
            let (fl, fh) = f2.budget(d)?;
            let (gl, gh) = g2.budget(dg)?;
            let (a, b) = (rf.eval(d), rg.eval(dg));
            let (nlf, nlg) = (big_m + a, big_m + b);
            let lip_xi = nlf + fl * d + fh;
            Some((
                nlg * fl + nlf * gl * lip_xi,
                nlg * fh + d * a * gl * lip_xi + gh * lip_xi,
            ))
        },
    );
    QdqCertificate::new(
        f.x_bar.clone(),
        g.y_bar.clone(),
        f.gamma.clone(),
        lambda,
        delta_star,
        rho,
        family,
    )
}

/// `x ↦ αF(x) + βG(x)`.
pub fn linear_combination_map(alpha: f64, f: &Mapping, beta: f64, g: &Mapping) -> Result<Mapping> {
    if f.input_dim() != g.input_dim() || f.output_dim() != g.output_dim() {
        return Err(Error::Argument("linear combination needs matching shapes".into()));
    }
    let (f, g2) = (f.clone(), g.clone());
    Ok(Mapping::new(
        format!("{alpha}*{} + {beta}*{}", f.label(), g.label()),
        f.input_dim(),
        f.output_dim(),
        move |x| {
            let (a, b) = (f.call(x), g2.call(x));
            a.iter().zip(&b).map(|(a, b)| alpha * a + beta * b).collect()
        },
    ))
}

/// `x ↦ (F(x), G(x))`.
pub fn stacked_map(f: &Mapping, g: &Mapping) -> Result<Mapping> {
    if f.input_dim() != g.input_dim() {
        return Err(Error::dim(f.input_dim(), g.input_dim()));
    }
    let (f, g2) = (f.clone(), g.clone());
    Ok(Mapping::new(
        format!("({}, {})", f.label(), g.label()),
        f.input_dim(),
        f.output_dim() + g.output_dim(),
        move |x| f.call(x).into_iter().chain(g2.call(x)).collect(),
    ))
}

/// `x ↦ F(x)·G(x)` with `F` scalar.
pub fn product_map(f: &Mapping, g: &Mapping) -> Result<Mapping> {
    if f.input_dim() != g.input_dim() || f.output_dim() != 1 {
        return Err(Error::Argument("product needs a scalar first factor on a shared domain".into()));
    }
    let (f, g2) = (f.clone(), g.clone());
    Ok(Mapping::new(
        format!("{}*{}", f.label(), g.label()),
        f.input_dim(),
        g.output_dim(),
        move |x| {
            let s = f.call(x)[0];
            g2.call(x).into_iter().map(|v| s * v).collect()
        },
    ))
}

/// `G ∘ F`.
pub fn composed_map(f: &Mapping, g: &Mapping) -> Result<Mapping> {
    if f.output_dim() != g.input_dim() {
        return Err(Error::dim(g.input_dim(), f.output_dim()));
    }
    let (f, g2) = (f.clone(), g.clone());
    Ok(Mapping::new(
        format!("{} o {}", g.label(), f.label()),
        f.input_dim(),
        g.output_dim(),
        move |x| g2.call(&f.call(x)),
    ))
}
