// SPDX-License-Identifier: Apache-2.0
use access::{make_threshold, AccessStructure};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use symplinalg::{is_col_orth, is_self_col_orth, MatGF, MatrixJson};

use crate::{accepts_one, is_mmsp, is_mmsp_lifted, MmspError, MmspVerdict, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleClass {
    Plain,
    Ea,
    Cq,
    Qq,
}

impl std::str::FromStr for BundleClass {
    type Err = MmspError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(BundleClass::Plain),
            "ea" => Ok(BundleClass::Ea),
            "cq" => Ok(BundleClass::Cq),
            "qq" => Ok(BundleClass::Qq),
            other => Err(MmspError::Json(format!("unknown class {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
}

impl Params {
    pub fn threshold(r: usize, t: usize, n: usize) -> Params {
        Params { n, r: Some(r), t: Some(t) }
    }
}

/// (G1, G2, F) with a class tag. For the plain class G1 holds G, G2 is
/// empty and the access structure lives on the rows directly; the other
/// classes have 2n rows and are judged against the symplectified structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmspBundle {
    pub class: BundleClass,
    pub g1: MatGF,
    pub g2: MatGF,
    pub f: MatGF,
    pub params: Params,
    pub access: Option<AccessStructure>,
}

impl MmspBundle {
    pub fn new(class: BundleClass, g1: MatGF, g2: MatGF, f: MatGF, params: Params) -> MmspBundle {
        MmspBundle { class, g1, g2, f, params, access: None }
    }

    pub fn with_access(mut self, fs: AccessStructure) -> MmspBundle {
        self.access = Some(fs);
        self
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn n_bar(&self) -> usize {
        self.f.rows()
    }

    pub fn x(&self) -> usize {
        self.f.cols()
    }

    pub fn y1(&self) -> usize {
        self.g1.cols()
    }

    pub fn y2(&self) -> usize {
        self.g2.cols()
    }

    /// G = (G1, G2).
    pub fn g(&self) -> MatGF {
        self.g1.hcat(&self.g2).expect("bundle matrices share rows")
    }

    /// The structure the bundle is judged against (on [n], or on [nbar] for plain).
    pub fn structure(&self) -> Result<AccessStructure> {
        if let Some(fs) = &self.access {
            return Ok(fs.clone());
        }
        match (self.params.r, self.params.t) {
            (Some(r), Some(t)) => {
                let n = if self.class == BundleClass::Plain { self.n_bar() } else { self.params.n };
                make_threshold(r, t, n).map_err(|e| MmspError::Access(e.to_string()))
            }
            _ => Err(MmspError::Access("bundle has neither an access structure nor (r, t)".into())),
        }
    }

    pub fn with_class(&self, class: BundleClass) -> MmspBundle {
        MmspBundle { class, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassVerdict {
    pub class: BundleClass,
    pub mmsp: MmspVerdict,
}

impl ClassVerdict {
    pub fn ok(&self) -> bool {
        self.mmsp.ok
    }
}

fn violated(what: impl Into<String>) -> MmspError {
    MmspError::ClassInvariantViolated(what.into())
}

fn check_shapes(b: &MmspBundle) -> Result<()> {
    let rows = b.f.rows();
    if b.g1.rows() != rows || b.g2.rows() != rows {
        return Err(violated("G1, G2 and F must have the same number of rows"));
    }
    if b.class != BundleClass::Plain && rows != 2 * b.params.n {
        return Err(violated(format!("expected 2n = {} rows, got {rows}", 2 * b.params.n)));
    }
    Ok(())
}

fn check_isotropic_g1(b: &MmspBundle) -> Result<()> {
    if !is_self_col_orth(&b.g1)? {
        return Err(violated("G1 is not self-column-orthogonal"));
    }
    if b.g1.rank() < b.g1.cols() {
        return Err(violated("G1 does not have full column rank"));
    }
    Ok(())
}

/// Structural invariants of the claimed class.
pub fn check_invariants(b: &MmspBundle) -> Result<()> {
    check_shapes(b)?;
    let n = b.params.n;
    match b.class {
        BundleClass::Plain => {}
        BundleClass::Ea => check_isotropic_g1(b)?,
        BundleClass::Cq => {
            check_isotropic_g1(b)?;
            if b.y1() != n {
                return Err(violated(format!("CQ needs y1 = n = {n}, got y1 = {}", b.y1())));
            }
        }
        BundleClass::Qq => {
            check_isotropic_g1(b)?;
            if b.x() % 2 == 1 {
                return Err(violated(format!("QQ needs an even number of F columns, got {}", b.x())));
            }
            let xp = b.x() / 2;
            if xp > n || b.y1() != n - xp {
                return Err(violated(format!("QQ needs G1 with n - x' = {} columns, got {}", n.saturating_sub(xp), b.y1())));
            }
            if !is_col_orth(&b.f, &b.g1)? {
                return Err(violated("F is not column-orthogonal to G1"));
            }
        }
    }
    Ok(())
}

/// Structural invariants, then ((G1, G2), F) against the (symplectified) structure.
pub fn classify(b: &MmspBundle) -> Result<ClassVerdict> {
    check_invariants(b)?;
    let fs = b.structure()?;
    let g = b.g();
    let mmsp = match b.class {
        BundleClass::Plain => is_mmsp(&g, &b.f, &fs)?,
        _ => is_mmsp_lifted(&g, &b.f, &fs)?,
    };
    Ok(ClassVerdict { class: b.class, mmsp })
}

/// `classify` collapsed to a boolean; invariant violations count as false.
pub fn classify_verdict(b: &MmspBundle) -> Result<bool> {
    match classify(b) {
        Ok(v) => Ok(v.ok()),
        Err(MmspError::ClassInvariantViolated(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

fn accepts_lifted_threshold(g1: &MatGF, f: &MatGF, r: usize, n: usize) -> Result<bool> {
    for a in access::subsets_of_size(n, r) {
        if !accepts_one(g1, f, access::symplectify(a, n))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (n, ceil((y1 + x)/2))-EAMDS: (G1, F) accepts every symplectified set of that size.
pub fn is_eamds(g1: &MatGF, f: &MatGF) -> Result<bool> {
    if g1.rows() % 2 == 1 {
        return Err(violated("odd number of rows"));
    }
    if !is_self_col_orth(g1)? {
        return Err(violated("G1 is not self-column-orthogonal"));
    }
    let n = g1.rows() / 2;
    let r = (g1.cols() + f.cols()).div_ceil(2);
    if r > n {
        return Ok(false);
    }
    accepts_lifted_threshold(g1, f, r.max(1), n)
}

/// (n, r)-QQMDS with G1 of 2(n - r) columns and F of 2(2r - n) columns.
pub fn is_qqmds(g1: &MatGF, f: &MatGF) -> Result<bool> {
    if g1.rows() % 2 == 1 || f.cols() % 2 == 1 || g1.cols() % 2 == 1 {
        return Err(violated("QQMDS needs an even number of rows and columns"));
    }
    let n = g1.rows() / 2;
    let r = n - g1.cols() / 2;
    if f.cols() != 2 * (2 * r).saturating_sub(n) || 2 * r <= n {
        return Err(violated("F must have 2(2r - n) columns with r > n/2"));
    }
    if !is_self_col_orth(g1)? {
        return Err(violated("G1 is not self-column-orthogonal"));
    }
    if !is_col_orth(f, g1)? {
        return Err(violated("F is not column-orthogonal to G1"));
    }
    if f.rank() < f.cols() {
        return Ok(false);
    }
    accepts_lifted_threshold(g1, f, r, n)
}

/// JSON form of a bundle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleJson {
    pub class: BundleClass,
    #[serde(rename = "G1", alias = "G", default, skip_serializing_if = "Option::is_none")]
    pub g1: Option<MatrixJson>,
    #[serde(rename = "G2", default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<MatrixJson>,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub access: Option<Value>,
}

impl MmspBundle {
    pub fn to_json(&self) -> BundleJson {
        BundleJson {
            class: self.class,
            g1: Some(MatrixJson::from_mat(&self.g1)),
            g2: (self.g2.cols() > 0).then(|| MatrixJson::from_mat(&self.g2)),
            f: MatrixJson::from_mat(&self.f),
            params: self.params,
            access: self.access.as_ref().map(|a| a.to_json_value()),
        }
    }

    pub fn from_json(j: &BundleJson) -> Result<MmspBundle> {
        let conv = |m: &MatrixJson| m.to_mat().map_err(|e| MmspError::Json(e.to_string()));
        let f = conv(&j.f)?;
        let empty = || MatGF::zeros(f.field(), f.rows(), 0);
        let g1 = j.g1.as_ref().map(conv).transpose()?.unwrap_or_else(empty);
        let g2 = j.g2.as_ref().map(conv).transpose()?.unwrap_or_else(empty);
        if *g1.field() != *f.field() || *g2.field() != *f.field() {
            return Err(MmspError::Json("matrices over different fields".into()));
        }
        let access = j
            .access
            .as_ref()
            .map(AccessStructure::from_json_value)
            .transpose()
            .map_err(|e| MmspError::Access(e.to_string()))?;
        Ok(MmspBundle { class: j.class, g1, g2, f, params: j.params, access })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("bundle serializes")
    }

    pub fn from_json_str(s: &str) -> Result<MmspBundle> {
        let j: BundleJson = serde_json::from_str(s).map_err(|e| MmspError::Json(e.to_string()))?;
        MmspBundle::from_json(&j)
    }
}
