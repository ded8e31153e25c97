//! Command dispatch and report rendering.

use hermsig::algebra::{trace_form, AlgebraWithInvolution, Involution, TraceForm};
use hermsig::hermitian::HermForm;
use hermsig::numfield::{FieldElement, FieldTower, Ordering};
use hermsig::signature::{
    find_reference_tuple, involution_signatures, is_nil, lambda, m_signature, total_h_signature,
    verify_trace_formula_total, ReferenceTuple, RouteCheck, DEFAULT_POOL_BUDGET,
};
use serde::Serialize;

use crate::document::Document;
use crate::error::CliError;
use crate::model;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Hsig,
    Msig,
    Invsig,
    Nil,
    Ktf,
    Findref,
    Traceform,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flags {
    pub form: Option<String>,
    pub reference: Option<String>,
    pub ext: bool,
    pub json: bool,
    pub pool_budget: usize,
    pub no_findref: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            form: None,
            reference: None,
            ext: false,
            json: false,
            pool_budget: DEFAULT_POOL_BUDGET,
            no_findref: false,
        }
    }
}

/// Output lines and exit status of a successful run (0, or 2 when a trace formula check fails).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<String>,
    pub code: i32,
}

/// Runs a command; on error returns the exit code and a message.
pub fn run_command(cmd: Command, doc: &Document, flags: &Flags) -> Result<Report, CliError> {
    let base = model::algebra(doc)?;
    let ctx = Context::new(doc, flags, base)?;
    let mut out = Output {
        json: flags.json,
        lines: Vec::new(),
    };
    let code = match cmd {
        Command::Hsig => ctx.hsig(&mut out)?,
        Command::Msig => ctx.msig(&mut out)?,
        Command::Invsig => ctx.invsig(&mut out)?,
        Command::Nil => ctx.nil(&mut out)?,
        Command::Ktf => ctx.ktf(&mut out)?,
        Command::Findref => ctx.findref(&mut out)?,
        Command::Traceform => ctx.traceform(&mut out)?,
    };
    Ok(Report {
        lines: out.lines,
        code,
    })
}

struct Output {
    json: bool,
    lines: Vec<String>,
}

impl Output {
    fn emit(&mut self, text: String, record: &impl Serialize) {
        if self.json {
            self.lines
                .push(serde_json::to_string(record).expect("records serialize"));
        } else {
            self.lines.push(text);
        }
    }
}

struct Context<'a> {
    doc: &'a Document,
    flags: &'a Flags,
    base: AlgebraWithInvolution,
    /// `L` and `A ⊗ L` when `--ext` is given.
    ext: Option<(FieldTower, AlgebraWithInvolution)>,
}

#[derive(Serialize)]
struct SignatureRecord<'a> {
    ordering: usize,
    signs: &'a str,
    nil: bool,
    lambda: u8,
    #[serde(rename = "ref")]
    reference: Option<usize>,
    value: i64,
}

#[derive(Serialize)]
struct MRecord<'a> {
    ordering: usize,
    signs: &'a str,
    nil: bool,
    lambda: u8,
    value: i64,
}

#[derive(Serialize)]
struct ValueRecord<'a> {
    ordering: usize,
    signs: &'a str,
    value: u64,
}

#[derive(Serialize)]
struct NilRecord<'a> {
    ordering: usize,
    signs: &'a str,
    nil: bool,
    lambda: u8,
}

#[derive(Serialize)]
struct TermRecord<'a> {
    ordering: usize,
    signs: &'a str,
    value: i64,
}

#[derive(Serialize)]
struct KtfRecord<'a> {
    ordering: usize,
    signs: &'a str,
    lhs: i64,
    rhs: i64,
    terms: Vec<TermRecord<'a>>,
    status: &'a str,
}

#[derive(Serialize)]
struct FormRecord<'a> {
    form: &'a str,
    collapsed: bool,
    gram: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct TupleRecord<'a> {
    reference: &'a str,
    forms: &'a [String],
}

#[derive(Serialize)]
struct TraceRecord {
    dim: usize,
    diagonal: Vec<String>,
}

#[derive(Serialize)]
struct TraceSignatureRecord<'a> {
    ordering: usize,
    signs: &'a str,
    signature: i64,
}

impl<'a> Context<'a> {
    fn new(
        doc: &'a Document,
        flags: &'a Flags,
        base: AlgebraWithInvolution,
    ) -> Result<Self, CliError> {
        let ext = if flags.ext {
            Some(model::extension(doc, &base)?)
        } else {
            None
        };
        Ok(Context {
            doc,
            flags,
            base,
            ext,
        })
    }

    /// The algebra commands work over: `A`, or `A ⊗ L` with `--ext`.
    fn working(&self) -> &AlgebraWithInvolution {
        self.ext.as_ref().map_or(&self.base, |(_, a)| a)
    }

    fn form_name(&self) -> Result<&'a str, CliError> {
        self.flags.form.as_deref().ok_or(CliError::MissingForm)
    }

    fn form(&self) -> Result<HermForm, CliError> {
        model::form(self.doc, self.form_name()?, self.working())
    }

    fn orderings(&self) -> Result<Vec<Ordering>, CliError> {
        self.working()
            .orderings()
            .map_err(|e| CliError::validation("algebra block", e))
    }

    /// References over `A`: the named block, else a search unless disabled.
    fn base_references(&self, out: &mut Output) -> Result<ReferenceTuple, CliError> {
        match &self.flags.reference {
            Some(name) => model::reference(self.doc, name, &self.base),
            None if self.flags.no_findref => Err(CliError::MissingReference),
            None => {
                let refs = find_reference_tuple(&self.base, self.flags.pool_budget)?;
                write_tuple("found", &refs, out, "# ");
                Ok(refs)
            }
        }
    }

    /// References over the working algebra.
    fn references(&self, out: &mut Output) -> Result<ReferenceTuple, CliError> {
        let refs = self.base_references(out)?;
        match &self.ext {
            Some((l, _)) => Ok(refs.extend_scalars(l)?),
            None => Ok(refs),
        }
    }

    fn hsig(&self, out: &mut Output) -> Result<i32, CliError> {
        let h = self.form()?;
        let refs = self.references(out)?;
        for r in total_h_signature(&h, &refs)? {
            let record = SignatureRecord {
                ordering: r.ordering_index,
                signs: &r.signs,
                nil: r.nil,
                lambda: r.lambda,
                reference: r.reference,
                value: r.value,
            };
            out.emit(r.to_string(), &record);
        }
        Ok(0)
    }

    fn msig(&self, out: &mut Output) -> Result<i32, CliError> {
        let h = self.form()?;
        let a = self.working();
        for (idx, p) in self.orderings()?.iter().enumerate() {
            let signs = p.signs_label();
            let record = MRecord {
                ordering: idx,
                signs: &signs,
                nil: is_nil(a, p)?,
                lambda: lambda(a, p)?,
                value: m_signature(&h, p)?,
            };
            let text = format!(
                "P#{idx} signs={signs} nil={} lambda={} value={}",
                record.nil, record.lambda, record.value
            );
            out.emit(text, &record);
        }
        Ok(0)
    }

    fn involution(&self) -> Result<Box<dyn Involution>, CliError> {
        match &self.flags.form {
            Some(_) => {
                let h = self.form()?;
                let ad = h
                    .adjoint_involution()
                    .map_err(|e| CliError::validation("form", e))?;
                Ok(Box::new(ad))
            }
            None => Ok(Box::new(self.working().clone())),
        }
    }

    fn invsig(&self, out: &mut Output) -> Result<i32, CliError> {
        let tau = self.involution()?;
        let ps = self.orderings()?;
        for (idx, (p, v)) in ps
            .iter()
            .zip(involution_signatures(tau.as_ref(), &ps)?)
            .enumerate()
        {
            let signs = p.signs_label();
            out.emit(
                format!("P#{idx} signs={signs} value={v}"),
                &ValueRecord {
                    ordering: idx,
                    signs: &signs,
                    value: v,
                },
            );
        }
        Ok(0)
    }

    fn nil(&self, out: &mut Output) -> Result<i32, CliError> {
        let a = self.working();
        for (idx, p) in self.orderings()?.iter().enumerate() {
            let signs = p.signs_label();
            let record = NilRecord {
                ordering: idx,
                signs: &signs,
                nil: is_nil(a, p)?,
                lambda: lambda(a, p)?,
            };
            let text = format!(
                "P#{idx} signs={signs} nil={} lambda={}",
                record.nil, record.lambda
            );
            out.emit(text, &record);
        }
        Ok(0)
    }

    fn ktf(&self, out: &mut Output) -> Result<i32, CliError> {
        if self.ext.is_none() {
            return Err(CliError::MissingExtension);
        }
        let h = self.form()?;
        let refs = self.base_references(out)?;
        let mut code = 0;
        for r in verify_trace_formula_total(&h, &self.base, &refs, RouteCheck::Full)? {
            let status = if r.holds() { "PASS" } else { "FAIL" };
            if !r.holds() {
                code = 2;
            }
            let terms: Vec<String> = r
                .extensions
                .iter()
                .map(|(q, _, v)| format!("Q#{q}={v}"))
                .collect();
            let text = format!(
                "P#{} signs={} lhs={} rhs={} terms=[{}] {status}",
                r.ordering_index,
                r.signs,
                r.lhs,
                r.rhs,
                terms.join(",")
            );
            let record = KtfRecord {
                ordering: r.ordering_index,
                signs: &r.signs,
                lhs: r.lhs,
                rhs: r.rhs,
                terms: r
                    .extensions
                    .iter()
                    .map(|(q, s, v)| TermRecord {
                        ordering: *q,
                        signs: s,
                        value: *v,
                    })
                    .collect(),
                status,
            };
            out.emit(text, &record);
        }
        Ok(code)
    }

    fn findref(&self, out: &mut Output) -> Result<i32, CliError> {
        let refs = find_reference_tuple(self.working(), self.flags.pool_budget)?;
        write_tuple("H", &refs, out, "");
        Ok(0)
    }

    fn traceform(&self, out: &mut Output) -> Result<i32, CliError> {
        let tau = self.involution()?;
        let tf = trace_form(tau.as_ref()).map_err(|e| CliError::validation("algebra", e))?;
        let entries: Vec<FieldElement> = match &tf {
            TraceForm::First(q) => q.diagonal_entries(),
            TraceForm::Second(h) => h
                .diagonal_entries()
                .map_err(|e| CliError::validation("algebra", e))?,
        };
        let diagonal: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
        out.emit(
            format!("dim={} diagonal=[{}]", tf.dim(), diagonal.join(", ")),
            &TraceRecord {
                dim: tf.dim(),
                diagonal,
            },
        );
        for (idx, p) in self.orderings()?.iter().enumerate() {
            let signature = match &tf {
                TraceForm::First(q) => q.signature(p),
                TraceForm::Second(h) => h.signature(p),
            }
            .map_err(|e| CliError::validation("algebra", e))?;
            let signs = p.signs_label();
            out.emit(
                format!("P#{idx} signs={signs} signature={signature}"),
                &TraceSignatureRecord {
                    ordering: idx,
                    signs: &signs,
                    signature,
                },
            );
        }
        Ok(0)
    }
}

/// Writes a tuple as document blocks, each line prefixed (`"# "` keeps it a comment).
fn write_tuple(name: &str, refs: &ReferenceTuple, out: &mut Output, prefix: &str) {
    let (forms, reference) = model::tuple_specs(name, refs);
    for f in &forms {
        let gram = match &f.body {
            crate::document::FormBody::Gram(g) => g
                .iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
            crate::document::FormBody::Diagonal(_) => unreachable!("tuple forms carry grams"),
        };
        out.emit(
            format!("{prefix}{f}"),
            &FormRecord {
                form: &f.name,
                collapsed: f.collapsed,
                gram,
            },
        );
    }
    out.emit(
        format!("{prefix}{reference}"),
        &TupleRecord {
            reference: &reference.name,
            forms: &reference.forms,
        },
    );
}
