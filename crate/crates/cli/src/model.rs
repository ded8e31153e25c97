//! Turning a parsed document into algebras and forms.

use hermsig::algebra::{AlgebraWithInvolution, DElement, DivisionData};
use hermsig::hermitian::HermForm;
use hermsig::matrix::{Matrix, Ring};
use hermsig::numfield::{FieldElement, FieldTower};
use hermsig::signature::ReferenceTuple;

use crate::document::{
    parse_expr, DivisionSpec, Document, Expr, ExprMatrix, FormBody, FormSpec, ReferenceSpec,
};
use crate::error::CliError;

/// Evaluates an element expression in `D`.
pub fn eval(e: &Expr, d: &DivisionData) -> Result<DElement, String> {
    Ok(match e {
        Expr::Num(q) => d.scalar(FieldElement::from_rational(d.field(), q.clone())),
        Expr::Name(n) => name(n, d)?,
        Expr::Neg(x) => eval(x, d)?.neg(),
        Expr::Add(a, b) => eval(a, d)?.add(&eval(b, d)?),
        Expr::Sub(a, b) => eval(a, d)?.sub(&eval(b, d)?),
        Expr::Mul(a, b) => eval(a, d)?.mul(&eval(b, d)?),
    })
}

fn name(n: &str, d: &DivisionData) -> Result<DElement, String> {
    let t = d.field();
    if let Some(level) = n.strip_prefix('r').and_then(|k| k.parse::<usize>().ok()) {
        if (1..=t.depth()).contains(&level) {
            return Ok(d.scalar(t.generator(level - 1)));
        }
        return Err(format!(
            "unknown generator `{n}` (the field has {})",
            t.depth()
        ));
    }
    let units = ["i", "j", "k"];
    if d.is_quaternion() {
        if let Some(u) = units.iter().position(|&u| u == n) {
            return Ok(d.unit(u + 1));
        }
    }
    if d.is_quadratic() && n == "s" {
        return Ok(d.unit(1));
    }
    Err(format!("unknown name `{n}`"))
}

fn eval_scalar(e: &Expr, t: &FieldTower) -> Result<FieldElement, String> {
    let x = eval(e, &DivisionData::base_field(t))?;
    Ok(x.scalar_part().clone())
}

fn eval_matrix(rows: &ExprMatrix, d: &DivisionData) -> Result<Matrix<DElement>, String> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err("matrix must be square and nonempty".into());
    }
    let entries = rows
        .iter()
        .map(|r| r.iter().map(|e| eval(e, d)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(entries))
}

fn tower_over(base: &FieldTower, radicands: &[Expr], block: &str) -> Result<FieldTower, CliError> {
    let mut t = base.clone();
    for e in radicands {
        let a = eval_scalar(e, &t).map_err(|m| CliError::validation(block, m))?;
        t = t
            .extend(&a)
            .map_err(|err| CliError::validation(block, err))?;
    }
    Ok(t)
}

pub fn field(doc: &Document) -> Result<FieldTower, CliError> {
    tower_over(&FieldTower::rationals(), &doc.field, "field block")
}

pub fn algebra(doc: &Document) -> Result<AlgebraWithInvolution, CliError> {
    let t = field(doc)?;
    let block = "algebra block";
    let v = |m: String| CliError::validation(block, m);
    let spec = &doc.algebra;
    let d = match &spec.division {
        DivisionSpec::Field => DivisionData::base_field(&t),
        DivisionSpec::Quaternion(a, b) => DivisionData::quaternion(
            eval_scalar(a, &t).map_err(v)?,
            eval_scalar(b, &t).map_err(v)?,
        )
        .map_err(|e| CliError::validation(block, e))?,
        DivisionSpec::Quadratic(x) => DivisionData::quadratic(eval_scalar(x, &t).map_err(v)?)
            .map_err(|e| CliError::validation(block, e))?,
    };
    let phi0 = match &spec.phi0 {
        Some(rows) => eval_matrix(rows, &d).map_err(v)?,
        None => Matrix::identity(spec.m, &d.one()),
    };
    if phi0.rows() != spec.m {
        return Err(v(format!(
            "phi0 is {0}x{0} but m is {1}",
            phi0.rows(),
            spec.m
        )));
    }
    AlgebraWithInvolution::new(d, phi0, spec.epsilon0).map_err(|e| CliError::validation(block, e))
}

/// `L` and `A ⊗ L` from the extension block.
pub fn extension(
    doc: &Document,
    a: &AlgebraWithInvolution,
) -> Result<(FieldTower, AlgebraWithInvolution), CliError> {
    let radicands = doc.extension.as_ref().ok_or(CliError::MissingExtension)?;
    let block = "extension block";
    let l = tower_over(a.field(), radicands, block)?;
    let al = a
        .extend_scalars(&l)
        .map_err(|e| CliError::validation(block, e))?;
    Ok((l, al))
}

pub fn form(doc: &Document, name: &str, a: &AlgebraWithInvolution) -> Result<HermForm, CliError> {
    let spec = doc
        .form(name)
        .ok_or_else(|| CliError::UnknownForm(name.to_string()))?;
    let block = format!("form {name}");
    let d = a.division();
    let v = |m: String| CliError::validation(&block, m);
    let result = match (&spec.body, spec.collapsed) {
        (FormBody::Gram(rows), false) => HermForm::new(a, eval_matrix(rows, d).map_err(v)?),
        (FormBody::Gram(rows), true) => HermForm::collapsed(a, eval_matrix(rows, d).map_err(v)?),
        (FormBody::Diagonal(units), false) => {
            let units = units
                .iter()
                .map(|u| eval_matrix(u, d))
                .collect::<Result<Vec<_>, _>>()
                .map_err(v)?;
            HermForm::diagonal(a, &units)
        }
        (FormBody::Diagonal(_), true) => {
            return Err(v("a collapsed form is given by its gram matrix".into()))
        }
    };
    result.map_err(|e| CliError::validation(&block, e))
}

pub fn reference(
    doc: &Document,
    name: &str,
    a: &AlgebraWithInvolution,
) -> Result<ReferenceTuple, CliError> {
    let spec = doc
        .reference(name)
        .ok_or_else(|| CliError::UnknownReference(name.to_string()))?;
    let forms = spec
        .forms
        .iter()
        .map(|f| form(doc, f, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ReferenceTuple::unchecked(a, forms)?)
}

fn to_exprs(m: &Matrix<DElement>) -> ExprMatrix {
    m.to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| parse_expr(&x.to_string()).expect("printed elements parse"))
                .collect()
        })
        .collect()
}

/// A computed form as a document block.
pub fn form_spec(name: &str, h: &HermForm) -> FormSpec {
    if h.is_collapsed_only() {
        FormSpec {
            name: name.to_string(),
            collapsed: true,
            body: FormBody::Gram(to_exprs(&h.collapsed_gram())),
        }
    } else {
        FormSpec {
            name: name.to_string(),
            collapsed: false,
            body: FormBody::Gram(to_exprs(h.gram())),
        }
    }
}

/// A computed tuple as form blocks `<prefix>1, <prefix>2, ...` plus a reference block.
pub fn tuple_specs(name: &str, refs: &ReferenceTuple) -> (Vec<FormSpec>, ReferenceSpec) {
    let forms: Vec<FormSpec> = refs
        .forms()
        .iter()
        .enumerate()
        .map(|(i, h)| form_spec(&format!("{}{}", name.to_lowercase(), i + 1), h))
        .collect();
    let reference = ReferenceSpec {
        name: name.to_string(),
        forms: forms.iter().map(|f| f.name.clone()).collect(),
    };
    (forms, reference)
}
