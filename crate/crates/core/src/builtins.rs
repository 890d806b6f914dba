//! Named instances of every function family, addressable by selector
//! strings such as `zeta1:0.5` or `cclass_c:2,3`.

use crate::error::{Error, Result};
use crate::framework::{
    AlphaFunction, CClassFunction, ContractionBundle, GeraghtyBeta, Mapping, SimulationFunction,
};
use crate::metric::Point;
use crate::poset::{alpha_from_order, PartialOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuiltinEntry {
    pub family: &'static str,
    pub selector: &'static str,
    pub formula: &'static str,
}

const CATALOG: &[BuiltinEntry] = &[
    BuiltinEntry { family: "zeta", selector: "zeta1(lambda)", formula: "lambda*s - t, 0 < lambda < 1" },
    BuiltinEntry { family: "zeta", selector: "zeta2", formula: "s*phi(s) - t, phi(s) = 1/(1+s)" },
    BuiltinEntry { family: "zeta", selector: "zeta3", formula: "s - psi(s) - t, psi(s) = s/(1+s)" },
    BuiltinEntry { family: "zeta", selector: "zeta_rational", formula: "s/(s+1) - t" },
    BuiltinEntry { family: "zeta", selector: "zeta_bvp", formula: "(1/4)s - t" },
    BuiltinEntry { family: "zeta", selector: "zeta_example31", formula: "(8/9)s - t" },
    BuiltinEntry { family: "G", selector: "cclass_a(r)", formula: "cclass_a: s - t, C_G = r" },
    BuiltinEntry { family: "G", selector: "cclass_b", formula: "cclass_b: s − (2+t)t/(1+t), C_G = 0" },
    BuiltinEntry { family: "G", selector: "cclass_c(k,r)", formula: "cclass_c: s/(1+kt), C_G = r/(1+k), k >= 1, r >= 2" },
    BuiltinEntry { family: "beta", selector: "beta_inv", formula: "1/(1+t)" },
    BuiltinEntry { family: "beta", selector: "beta_const(c)", formula: "c, 0 <= c < 1" },
    BuiltinEntry { family: "beta", selector: "beta_half", formula: "1/2" },
    BuiltinEntry { family: "alpha", selector: "alpha_one", formula: "1" },
    BuiltinEntry { family: "alpha", selector: "alpha_indicator(lo,hi)", formula: "1 if x, y in [lo, hi], else 0" },
    BuiltinEntry { family: "alpha", selector: "alpha_order(natural|pointwise)", formula: "1 if x <= y, else 0" },
    BuiltinEntry { family: "T", selector: "affine(a,b)", formula: "a*x + b" },
    BuiltinEntry { family: "T", selector: "example31", formula: "x/3 on [0, 1], 3x elsewhere" },
    BuiltinEntry { family: "T", selector: "bvp_operator", formula: "(Tx)(t) = int_0^1 G(t,s) f(s,x(s)) ds, Green kernel G" },
    BuiltinEntry {
        family: "bundle",
        selector: "example31_bundle",
        formula: "T = example31, alpha = alpha_indicator(0,1), zeta = zeta_example31, beta = beta_inv, G = cclass_a(0)",
    },
];

pub fn catalog() -> &'static [BuiltinEntry] {
    CATALOG
}

/// One line per entry: `family  selector  formula`.
pub fn list_builtins() -> String {
    let width = CATALOG.iter().map(|e| e.selector.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for e in CATALOG {
        out.push_str(&format!("{:<6} {:<width$}  {}\n", e.family, e.selector, e.formula));
    }
    out
}

/// Splits `name:a,b` into the name and its numeric arguments.
fn split_selector(selector: &str) -> Result<(&str, Vec<f64>)> {
    let selector = selector.trim();
    let Some((name, args)) = selector.split_once(':') else {
        return Ok((selector, Vec::new()));
    };
    let args = args
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Config(format!("bad numeric argument {a:?} in {selector:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((name.trim(), args))
}

fn arity(selector: &str, args: &[f64], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(Error::Config(format!(
            "{selector:?} takes {n} argument(s), got {}",
            args.len()
        )));
    }
    Ok(())
}

/// `zeta1:lambda`, `zeta2`, `zeta3`, `zeta_rational`, `zeta_bvp` or
/// `zeta_example31`.
pub fn zeta(selector: &str) -> Result<SimulationFunction> {
    let (name, args) = split_selector(selector)?;
    match name {
        "zeta1" => {
            arity(selector, &args, 1)?;
            let lambda = args[0];
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(Error::Domain(format!("zeta1 needs 0 < lambda < 1, got {lambda}")));
            }
            Ok(SimulationFunction::linear(lambda))
        }
        "zeta2" => arity(selector, &args, 0).map(|_| zeta2()),
        "zeta3" => arity(selector, &args, 0).map(|_| zeta3()),
        "zeta_rational" => arity(selector, &args, 0).map(|_| SimulationFunction::rational()),
        "zeta_bvp" => arity(selector, &args, 0).map(|_| SimulationFunction::linear(0.25)),
        "zeta_example31" => arity(selector, &args, 0).map(|_| SimulationFunction::linear(8.0 / 9.0)),
        _ => Err(Error::Config(format!("unknown zeta {selector:?}"))),
    }
}

pub fn zeta2() -> SimulationFunction {
    SimulationFunction::with_phi("1/(1+s)", |s| 1.0 / (1.0 + s))
}

pub fn zeta3() -> SimulationFunction {
    SimulationFunction::with_psi("s/(1+s)", |s| s / (1.0 + s))
}

/// `cclass_a:r`, `cclass_b` or `cclass_c:k,r`.
pub fn cclass(selector: &str) -> Result<CClassFunction> {
    let (name, args) = split_selector(selector)?;
    match name {
        "cclass_a" => {
            arity(selector, &args, 1)?;
            CClassFunction::difference(args[0])
        }
        "cclass_b" => arity(selector, &args, 0).map(|_| CClassFunction::rational_shift()),
        "cclass_c" => {
            arity(selector, &args, 2)?;
            CClassFunction::damped(args[0], args[1])
        }
        _ => Err(Error::Config(format!("unknown C-class function {selector:?}"))),
    }
}

/// `beta_inv`, `beta_half` or `beta_const:c`.
pub fn beta(selector: &str) -> Result<GeraghtyBeta> {
    let (name, args) = split_selector(selector)?;
    match name {
        "beta_inv" => arity(selector, &args, 0).map(|_| GeraghtyBeta::inverse_one_plus()),
        "beta_half" => arity(selector, &args, 0).map(|_| GeraghtyBeta::constant(0.5)),
        "beta_const" => {
            arity(selector, &args, 1)?;
            Ok(GeraghtyBeta::constant(args[0]))
        }
        _ => Err(Error::Config(format!("unknown beta {selector:?}"))),
    }
}

/// `alpha_one`, `alpha_indicator:lo,hi`, `alpha_order:natural` or
/// `alpha_order:pointwise`.
pub fn alpha(selector: &str) -> Result<AlphaFunction> {
    let selector = selector.trim();
    if let Some(order) = selector.strip_prefix("alpha_order:") {
        let order = PartialOrder::by_name(order.trim())
            .ok_or_else(|| Error::Config(format!("unknown order {order:?}")))?;
        return Ok(alpha_from_order(&order));
    }
    let (name, args) = split_selector(selector)?;
    match name {
        "alpha_one" => arity(selector, &args, 0).map(|_| AlphaFunction::constant_one()),
        "alpha_indicator" => {
            arity(selector, &args, 2)?;
            Ok(AlphaFunction::box_indicator(args[0], args[1]))
        }
        _ => Err(Error::Config(format!("unknown alpha {selector:?}"))),
    }
}

/// `affine:a,b` or `example31`.
pub fn mapping(selector: &str) -> Result<Mapping> {
    let (name, args) = split_selector(selector)?;
    match name {
        "affine" => {
            arity(selector, &args, 2)?;
            Ok(Mapping::affine(args[0], args[1]))
        }
        "example31" => arity(selector, &args, 0).map(|_| example31_mapping()),
        _ => Err(Error::Config(format!("unknown mapping {selector:?}"))),
    }
}

/// `x/3` on `[0, 1]`, `3x` elsewhere on `[0, inf)`.
pub fn example31_mapping() -> Mapping {
    Mapping::new("example31: x/3 on [0,1], 3x elsewhere", |p| {
        let x = p.as_scalar()?;
        let y = if (0.0..=1.0).contains(&x) { x / 3.0 } else { 3.0 * x };
        Point::scalar(y)
    })
}

/// The worked instance on `[0, inf)`: `T` from [`example31_mapping`],
/// `alpha` the indicator of `[0, 1]^2`, `zeta(t, s) = (8/9) s - t`,
/// `beta(t) = 1/(1+t)`, `G(s, t) = s - t` with `C_G = 0`.
pub fn example31_bundle() -> ContractionBundle {
    ContractionBundle {
        mapping: example31_mapping(),
        alpha: AlphaFunction::box_indicator(0.0, 1.0),
        beta: GeraghtyBeta::inverse_one_plus(),
        zeta: SimulationFunction::linear(8.0 / 9.0),
        g: CClassFunction::difference(0.0).expect("C_G = 0 is valid"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_mentions_required_entries() {
        let text = list_builtins();
        for needle in ["zeta1(lambda)", "cclass_b: s − (2+t)t/(1+t)", "example31_bundle"] {
            assert!(text.contains(needle), "missing {needle}");
        }
        for family in ["zeta", "G", "beta", "alpha", "T"] {
            assert!(catalog().iter().any(|e| e.family == family));
        }
    }

    #[test]
    fn selectors_resolve() {
        assert_eq!(zeta("zeta1:0.5").unwrap().eval(1.0, 4.0), 1.0);
        assert!(zeta("zeta1:1.5").is_err());
        assert!(zeta("zeta1").is_err());
        assert!(zeta("zeta9").is_err());
        assert!((zeta2().eval(0.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((zeta3().eval(0.0, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(cclass("cclass_c:2,3").unwrap().c_g(), 1.0);
        assert_eq!(cclass("cclass_b").unwrap().eval(1.0, 0.0), 1.0);
        assert_eq!(beta("beta_const:0.25").unwrap().eval(3.0), 0.25);
        assert!(beta("beta_const:x").is_err());
        let a = alpha("alpha_order:natural").unwrap();
        assert_eq!(a.eval(&Point::Scalar(1.0), &Point::Scalar(2.0)), 1.0);
        assert!(alpha("alpha_order:lexicographic").is_err());
        assert_eq!(alpha("alpha_indicator:0,1").unwrap().eval(&Point::Scalar(0.5), &Point::Scalar(2.0)), 0.0);
        assert_eq!(mapping("affine:2,1").unwrap().apply(&Point::Scalar(1.0)).unwrap(), Point::Scalar(3.0));
    }

    #[test]
    fn example31_mapping_branches() {
        let t = example31_mapping();
        let ap = |x: f64| t.apply(&Point::Scalar(x)).unwrap().as_scalar().unwrap();
        assert_eq!(ap(0.9), 0.3);
        assert_eq!(ap(1.0), 1.0 / 3.0);
        assert_eq!(ap(2.0), 6.0);
    }
}
