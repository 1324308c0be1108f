use serde_json::{json, Value};

use super::Mat;
use crate::exactnum::{fmt_scalar, Scalar};
use crate::{Error, Result};

/// Role of a tensor factor. Evaluation points are part of the identity, so
/// `v(x)` and `v(xq⁻²)` never contract with each other by accident.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Quantum,
    /// `full = true` marks the N-dimensional `V(x)`, otherwise the
    /// (N−1)-dimensional `v(x)`.
    Vector { x: Scalar, full: bool },
    Fused { k: usize, x: Scalar },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSpace {
    pub id: String,
    pub kind: SpaceKind,
    pub dim: usize,
}

impl LabeledSpace {
    pub fn quantum(id: &str, dim: usize) -> Self {
        LabeledSpace { id: id.to_string(), kind: SpaceKind::Quantum, dim }
    }

    pub fn vector(id: &str, x: Scalar, dim: usize) -> Self {
        LabeledSpace { id: id.to_string(), kind: SpaceKind::Vector { x, full: false }, dim }
    }

    pub fn full_vector(id: &str, x: Scalar, dim: usize) -> Self {
        LabeledSpace { id: id.to_string(), kind: SpaceKind::Vector { x, full: true }, dim }
    }

    pub fn fused(id: &str, k: usize, x: Scalar, dim: usize) -> Self {
        LabeledSpace { id: id.to_string(), kind: SpaceKind::Fused { k, x }, dim }
    }

    fn to_json(&self) -> Value {
        let (kind, point, k) = match &self.kind {
            SpaceKind::Quantum => ("quantum", None, None),
            SpaceKind::Vector { x, full } => {
                (if *full { "V" } else { "v" }, Some(fmt_scalar(x)), None)
            }
            SpaceKind::Fused { k, x } => ("w", Some(fmt_scalar(x)), Some(*k)),
        };
        json!({ "id": self.id, "kind": kind, "dim": self.dim, "point": point, "k": k })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Out,
    In,
    Covector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub space: LabeledSpace,
    pub variance: Variance,
}

/// Dense multi-index array over labeled slots, row-major in slot order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTensor {
    slots: Vec<Slot>,
    data: Vec<Scalar>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    (0..dims.len()).map(|s| dims[s + 1..].iter().product()).collect()
}

impl OpTensor {
    pub fn new(slots: Vec<Slot>, data: Vec<Scalar>) -> Result<Self> {
        let n: usize = slots.iter().map(|s| s.space.dim).product();
        if n != data.len() {
            return Err(Error::ShapeMismatch(format!("{} entries for {} slots of total size {n}", data.len(), slots.len())));
        }
        Ok(OpTensor { slots, data })
    }

    /// Operator with `outs` as row slots and `ins` as column slots.
    pub fn from_matrix(outs: &[LabeledSpace], ins: &[LabeledSpace], m: &Mat) -> Result<Self> {
        let slots: Vec<Slot> = outs
            .iter()
            .map(|s| Slot { space: s.clone(), variance: Variance::Out })
            .chain(ins.iter().map(|s| Slot { space: s.clone(), variance: Variance::In }))
            .collect();
        let r: usize = outs.iter().map(|s| s.dim).product();
        let c: usize = ins.iter().map(|s| s.dim).product();
        if m.rows() != r || m.cols() != c {
            return Err(Error::ShapeMismatch(format!("matrix {}x{} vs slots {r}x{c}", m.rows(), m.cols())));
        }
        OpTensor::new(slots, m.data().to_vec())
    }

    /// Operator on a single group of spaces (same spaces in and out).
    pub fn operator(spaces: &[LabeledSpace], m: &Mat) -> Result<Self> {
        Self::from_matrix(spaces, spaces, m)
    }

    pub fn identity(space: &LabeledSpace) -> Self {
        Self::operator(std::slice::from_ref(space), &Mat::identity(space.dim)).expect("shape")
    }

    pub fn covector(space: &LabeledSpace, values: Vec<Scalar>) -> Result<Self> {
        OpTensor::new(vec![Slot { space: space.clone(), variance: Variance::Covector }], values)
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.space.dim).collect()
    }

    /// Matrix view with the slots of the given variances as rows, the rest as
    /// columns; slot order within each group is preserved.
    pub fn as_matrix(&self) -> Mat {
        let rows: Vec<usize> = (0..self.slots.len()).filter(|&i| self.slots[i].variance == Variance::Out).collect();
        let cols: Vec<usize> = (0..self.slots.len()).filter(|&i| self.slots[i].variance != Variance::Out).collect();
        let order: Vec<usize> = rows.iter().chain(cols.iter()).copied().collect();
        let p = self.permute(&order).expect("valid permutation");
        let r: usize = rows.iter().map(|&i| self.slots[i].space.dim).product();
        let c: usize = cols.iter().map(|&i| self.slots[i].space.dim).product();
        Mat::from_vec(r, c, p.data)
    }

    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.slots.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::ShapeMismatch("not a permutation".into()));
        }
        let dims = self.dims();
        let old_strides = strides(&dims);
        let new_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
        let total = self.data.len();
        let mut data = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let src: usize = (0..n).map(|t| idx[t] * old_strides[order[t]]).sum();
            data.push(self.data[src].clone());
            for t in (0..n).rev() {
                idx[t] += 1;
                if idx[t] < new_dims[t] {
                    break;
                }
                idx[t] = 0;
            }
        }
        let slots = order.iter().map(|&i| self.slots[i].clone()).collect();
        Ok(OpTensor { slots, data })
    }

    /// Kronecker product with concatenated slot lists.
    pub fn tensor_product(&self, other: &OpTensor) -> Result<Self> {
        for s in &self.slots {
            if other.slots.iter().any(|o| o.space.id == s.space.id) {
                return Err(Error::DuplicateSpace(s.space.id.clone()));
            }
        }
        let a = Mat::from_vec(self.data.len(), 1, self.data.clone());
        let b = Mat::from_vec(1, other.data.len(), other.data.clone());
        let data = a.matmul(&b).into_data();
        let slots = self.slots.iter().chain(other.slots.iter()).cloned().collect();
        Ok(OpTensor { slots, data })
    }

    fn find(&self, id: &str, variance: Variance) -> Option<usize> {
        self.slots.iter().position(|s| s.space.id == id && s.variance == variance)
    }

    fn contract_pair(&self, ia: usize, other: &OpTensor, ib: usize, relabel_in_to_cov: Option<&str>) -> Result<Self> {
        let sa = &self.slots[ia].space;
        let sb = &other.slots[ib].space;
        if sa.dim != sb.dim {
            return Err(Error::ShapeMismatch(format!("space `{}`: {} vs {}", sa.id, sa.dim, sb.dim)));
        }
        if sa.kind != sb.kind {
            return Err(Error::EvaluationPointMismatch(sa.id.clone()));
        }
        let na = self.slots.len();
        let order_a: Vec<usize> = (0..na).filter(|&i| i != ia).chain(std::iter::once(ia)).collect();
        let nb = other.slots.len();
        let order_b: Vec<usize> = std::iter::once(ib).chain((0..nb).filter(|&i| i != ib)).collect();
        let pa = self.permute(&order_a)?;
        let pb = other.permute(&order_b)?;
        let d = sa.dim;
        let ma = Mat::from_vec(pa.data.len() / d, d, pa.data);
        let mb = Mat::from_vec(d, pb.data.len() / d, pb.data);
        let data = ma.matmul(&mb).into_data();
        let mut slots: Vec<Slot> = pa.slots[..na - 1].to_vec();
        for s in &pb.slots[1..] {
            let mut s = s.clone();
            if let Some(id) = relabel_in_to_cov {
                if s.space.id == id && s.variance == Variance::In {
                    s.variance = Variance::Covector;
                }
            }
            slots.push(s);
        }
        Ok(OpTensor { slots, data })
    }

    /// Contracts each `In` slot of `self` named in `on` with the matching
    /// `Out` slot of `b`. For plain operators this is the product `self · b`.
    pub fn compose(&self, b: &OpTensor, on: &[&str]) -> Result<Self> {
        let mut ia = Vec::with_capacity(on.len());
        let mut ib = Vec::with_capacity(on.len());
        for id in on {
            let i = self.find(id, Variance::In).ok_or_else(|| Error::ShapeMismatch(format!("no input slot `{id}`")))?;
            let j = b.find(id, Variance::Out).ok_or_else(|| Error::ShapeMismatch(format!("no output slot `{id}`")))?;
            let (sa, sb) = (&self.slots[i].space, &b.slots[j].space);
            if sa.dim != sb.dim {
                return Err(Error::ShapeMismatch(format!("space `{id}`: {} vs {}", sa.dim, sb.dim)));
            }
            if sa.kind != sb.kind {
                return Err(Error::EvaluationPointMismatch(sa.id.clone()));
            }
            ia.push(i);
            ib.push(j);
        }
        let rest_a: Vec<usize> = (0..self.slots.len()).filter(|i| !ia.contains(i)).collect();
        let rest_b: Vec<usize> = (0..b.slots.len()).filter(|j| !ib.contains(j)).collect();
        for &i in &rest_a {
            if rest_b.iter().any(|&j| b.slots[j].space.id == self.slots[i].space.id && b.slots[j].variance == self.slots[i].variance) {
                return Err(Error::DuplicateSpace(self.slots[i].space.id.clone()));
            }
        }
        let pa = self.permute(&rest_a.iter().chain(ia.iter()).copied().collect::<Vec<_>>())?;
        let pb = b.permute(&ib.iter().chain(rest_b.iter()).copied().collect::<Vec<_>>())?;
        let d: usize = ia.iter().map(|&i| self.slots[i].space.dim).product();
        let ma = Mat::from_vec(pa.data.len() / d, d, pa.data);
        let mb = Mat::from_vec(d, pb.data.len() / d, pb.data);
        let data = ma.matmul(&mb).into_data();
        let slots = rest_a.iter().map(|&i| self.slots[i].clone()).chain(rest_b.iter().map(|&j| b.slots[j].clone())).collect();
        Ok(OpTensor { slots, data })
    }

    /// Row-vector action `ξ · A` on slot `slot`: contracts `ξ`'s covector slot
    /// with `A`'s output slot and turns `A`'s input slot into a covector slot.
    pub fn contract_covector(xi: &OpTensor, a: &OpTensor, slot: &str) -> Result<Self> {
        let ix = xi.find(slot, Variance::Covector).ok_or_else(|| Error::ShapeMismatch(format!("no covector slot `{slot}`")))?;
        let ia = a.find(slot, Variance::Out).ok_or_else(|| Error::ShapeMismatch(format!("no output slot `{slot}`")))?;
        xi.contract_pair(ix, a, ia, Some(slot))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "spaces": self.slots.iter().map(|s| {
                let mut v = s.space.to_json();
                v["variance"] = json!(match s.variance { Variance::Out => "out", Variance::In => "in", Variance::Covector => "covector" });
                v
            }).collect::<Vec<_>>(),
            "shape": self.dims(),
            "data": self.data.iter().map(fmt_scalar).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};
    use crate::tensorspace::inverse;

    fn h(dim: usize) -> LabeledSpace {
        LabeledSpace::quantum("H", dim)
    }

    #[test]
    fn identity_product() {
        let a = OpTensor::identity(&LabeledSpace::quantum("A", 2));
        let b = OpTensor::identity(&LabeledSpace::quantum("B", 3));
        let ab = a.tensor_product(&b).unwrap();
        let order = [0, 2, 1, 3];
        assert_eq!(ab.permute(&order).unwrap().as_matrix(), Mat::identity(6));
    }

    #[test]
    fn duplicate_space_rejected() {
        let a = OpTensor::identity(&h(2));
        assert_eq!(a.tensor_product(&a), Err(Error::DuplicateSpace("H".into())));
    }

    #[test]
    fn compose_with_inverse() {
        let m = Mat::from_vec(3, 3, vec![
            int(1), frac(2, 3), int(0),
            int(0), int(-1), int(4),
            frac(1, 2), int(0), int(2),
        ]);
        let a = OpTensor::operator(&[h(3)], &m).unwrap();
        let ai = OpTensor::operator(&[h(3)], &inverse(&m).unwrap()).unwrap();
        let p = a.compose(&ai, &["H"]).unwrap();
        assert_eq!(p.as_matrix(), Mat::identity(3));
    }

    #[test]
    fn evaluation_points_distinguish_spaces() {
        let v1 = LabeledSpace::vector("v", int(1), 2);
        let v2 = LabeledSpace::vector("v", frac(25, 49), 2);
        let a = OpTensor::identity(&v1);
        let b = OpTensor::identity(&v2);
        assert_eq!(a.compose(&b, &["v"]), Err(Error::EvaluationPointMismatch("v".into())));
    }

    #[test]
    fn covector_through_identity() {
        let v = LabeledSpace::vector("v", int(2), 3);
        let xi = OpTensor::covector(&v, vec![int(1), int(-2), frac(1, 3)]).unwrap();
        let r = OpTensor::contract_covector(&xi, &OpTensor::identity(&v), "v").unwrap();
        assert_eq!(r, xi);
    }

    #[test]
    fn covector_row_convention() {
        let v = LabeledSpace::vector("v", int(2), 2);
        let xi = OpTensor::covector(&v, vec![int(1), int(2)]).unwrap();
        let a = OpTensor::operator(&[v.clone()], &Mat::from_i64(2, 2, &[1, 1, 0, 3])).unwrap();
        let r = OpTensor::contract_covector(&xi, &a, "v").unwrap();
        assert_eq!(r.data(), &[int(1), int(7)]);
    }

    #[test]
    fn permute_roundtrip() {
        let t = OpTensor::new(
            vec![
                Slot { space: LabeledSpace::quantum("a", 2), variance: Variance::Out },
                Slot { space: LabeledSpace::quantum("b", 3), variance: Variance::In },
                Slot { space: LabeledSpace::quantum("c", 2), variance: Variance::Covector },
            ],
            (0..12).map(int).collect(),
        )
        .unwrap();
        let p = t.permute(&[2, 0, 1]).unwrap();
        let back = p.permute(&[1, 2, 0]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn trace_over_repeated_contraction() {
        let a = LabeledSpace::quantum("a", 2);
        let b = LabeledSpace::quantum("b", 2);
        let m1 = Mat::from_i64(2, 2, &[1, 2, 3, 4]);
        let m2 = Mat::from_i64(2, 2, &[0, 1, 1, 0]);
        let t1 = OpTensor::operator(&[a.clone()], &m1).unwrap().tensor_product(&OpTensor::operator(&[b.clone()], &m2).unwrap()).unwrap();
        let t2 = OpTensor::identity(&a).tensor_product(&OpTensor::identity(&b)).unwrap();
        let p = t1.compose(&t2, &["a", "b"]).unwrap();
        let expect = m1.kron(&m2);
        let got = p.permute(&[0, 2, 1, 3]).unwrap();
        assert_eq!(got.as_matrix(), expect);
    }
}
