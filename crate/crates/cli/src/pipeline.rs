//! Stages shared by the single commands and the built-in pipelines. Each
//! stage appends one step, with its certificates, to a report.

use std::fmt::Display;
use std::sync::Arc;

use cfk_core::{
    builtin, check_iota_relations, coevaluation, connected_sum_surgery, double_parts, dual_surgery, dual_surgery_map,
    dualize, extract_a0, find_local_map_to_trivial, homology_fu, induced_action_table, intersection_form_w1n,
    invariant_subspace_with, obstruct_decomposition, reflect_map, standard_model, tensor_complex, tensor_maps_between,
    verify_iota_local, verify_local, BuiltinName, Complex, Convention, GradedMap, HomologyDecomposition, IotaComplex,
    IotaTauComplex, Monomial, ObstructionStatus, ObstructionVerdict, Ring, StandardModel, SumIsomorphisms,
    SurgeryComplex, Symmetries,
};
use cfk_core::{homotopic, F2Matrix};
use num_rational::Rational64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::document::{format_rational, ComplexDocument, DocumentError, Loaded, MapDocument};
use crate::report::{Report, Step, Verdict};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{stage}: {message}")]
    Stage { stage: String, message: String },
    #[error(transparent)]
    Document(#[from] DocumentError),
}

pub type Result<T> = std::result::Result<T, PipelineError>;

fn at<E: Display>(stage: &str) -> impl FnOnce(E) -> PipelineError + '_ {
    move |e| PipelineError::Stage { stage: stage.to_string(), message: e.to_string() }
}

fn fail<T>(stage: &str, message: impl Into<String>) -> Result<T> {
    Err(PipelineError::Stage { stage: stage.to_string(), message: message.into() })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub convention: Convention,
}

/// Grading shift of the cobordism used to normalize large surgeries.
pub const SURGERY_COEFFICIENT: i64 = 5;

fn rational(r: Rational64) -> Value {
    Value::String(format_rational(r))
}

fn matrix_rows(m: &F2Matrix) -> Value {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| if m.get(r, c) { '1' } else { '0' }).collect::<String>())
        .collect::<Vec<_>>()
        .into()
}

fn map_images(f: &GradedMap) -> Value {
    f.describe().into_iter().map(|(g, image)| json!({ "generator": g, "image": image })).collect::<Vec<_>>().into()
}

fn relation_certificates(step: &mut Step, c: &Arc<Complex>, iota: &GradedMap, tau: Option<&GradedMap>) -> Result<bool> {
    let r = check_iota_relations(c, iota, tau).map_err(at(&step.operation))?;
    let square =
        if c.ring() == Ring::TwoVariable { "iota-squared-homotopic-to-sarkar" } else { "iota-squared-homotopic-to-id" };
    step.certify("iota-chain-map", r.iota_chain_map)
        .certify("iota-homogeneous", r.iota_homogeneous)
        .certify(square, r.iota_squared);
    if let Some(t) = &r.tau {
        step.certify("tau-chain-map", t.chain_map)
            .certify("tau-homogeneous", t.homogeneous)
            .certify("tau-squared-homotopic-to-id", t.squared_identity);
    }
    if !r.unchecked.is_empty() {
        step.output("unchecked", r.unchecked.clone());
    }
    Ok(r.all_pass())
}

fn describe_complex(step: &mut Step, c: &Complex) {
    step.output("ring", c.ring().name()).output("generators", c.len()).output("shift", rational(c.shift()));
}

pub fn load_stage(report: &mut Report, label: &str, doc: &ComplexDocument) -> Result<Loaded> {
    let mut step = Step::new("load", [label]);
    let loaded = doc.load()?;
    step.output("name", doc.name.as_str()).output("kind", loaded.kind());
    describe_complex(&mut step, loaded.complex());
    step.certify("complex-valid", true);
    match &loaded {
        Loaded::Knot(k) => {
            relation_certificates(&mut step, &k.complex, &k.iota, None)?;
        }
        Loaded::KnotWithTau(k) => {
            relation_certificates(&mut step, &k.complex, &k.iota, Some(&k.tau))?;
        }
        Loaded::Surgery(s) => {
            relation_certificates(&mut step, &s.complex, &s.iota, Some(&s.tau))?;
        }
        Loaded::Bare(_) => {}
    }
    report.steps.push(step);
    Ok(loaded)
}

pub fn builtin_stage(report: &mut Report, name: BuiltinName) -> Result<IotaComplex> {
    let mut step = Step::new("builtin", [name.name()]);
    let k = builtin(name).map_err(at("builtin"))?;
    describe_complex(&mut step, &k.complex);
    step.output("iota", map_images(&k.iota));
    relation_certificates(&mut step, &k.complex, &k.iota, None)?;
    report.steps.push(step);
    Ok(k)
}

pub fn double_stage(report: &mut Report, k: &IotaComplex, opts: Options) -> Result<IotaTauComplex> {
    let mut step = Step::new("double", ["C"]);
    let parts = double_parts(k, opts.convention).map_err(at("double"))?;
    let (tau, iota) = match opts.convention {
        Convention::Thm31 => ("(id + Ψ⊗Φ) ∘ τ_exch", "ς ∘ (id + Ψ⊗Φ) ∘ (ι ⊗ ι^r)"),
        Convention::Remark32 => ("ς ∘ (id + Ψ⊗Φ) ∘ τ_exch", "(id + Ψ⊗Φ) ∘ (ι ⊗ ι^r)"),
    };
    step.output("convention", opts.convention.name()).output("tau", tau).output("iota", iota);
    describe_complex(&mut step, &parts.tensor);
    let cross = parts.correction.plus_identity().map_err(at("double"))?;
    let nonzero: Vec<Value> = cross
        .describe()
        .into_iter()
        .filter(|(_, image)| image != "0")
        .map(|(g, image)| json!({ "generator": g, "image": image }))
        .collect();
    step.output("psi_phi_nonzero", nonzero);
    let d = parts.result;
    step.certify("complex-valid", cfk_core::validate_complex(&d.complex).is_valid());
    step.certify("exchange-squares-to-id", {
        let t = &parts.tau_exch;
        t.compose(t).map_err(at("double"))? == GradedMap::identity(&parts.tensor)
    });
    relation_certificates(&mut step, &d.complex, &d.iota, Some(&d.tau))?;
    report.steps.push(step);
    Ok(d)
}

pub fn a0_stage(report: &mut Report, d: &IotaTauComplex) -> Result<SurgeryComplex> {
    let mut step = Step::new("a0", ["C ⊗ C^r"]);
    let s = extract_a0(d).map_err(at("a0"))?;
    describe_complex(&mut step, &s.complex);
    let ids: Vec<Value> =
        (0..s.complex.len()).map(|i| json!({ "generator": s.complex.id(i), "maslov": s.complex.maslov(i) })).collect();
    step.output("basis", ids);
    step.certify("surgery-complex-valid", s.check().is_ok());
    report.steps.push(step);
    Ok(s)
}

/// Brings a loaded structure down to a surgery complex, recording each stage.
pub fn lift_to_surgery(report: &mut Report, loaded: Loaded, opts: Options) -> Result<SurgeryComplex> {
    match loaded {
        Loaded::Knot(k) => {
            let d = double_stage(report, &k, opts)?;
            a0_stage(report, &d)
        }
        Loaded::KnotWithTau(d) => a0_stage(report, &d),
        Loaded::Surgery(s) => Ok(s),
        Loaded::Bare(_) => fail("lift", "the document declares neither ι nor τ"),
    }
}

fn module_shape(h: &HomologyDecomposition) -> String {
    let mut parts = Vec::new();
    match h.tower_rank() {
        0 => {}
        1 => parts.push("F[U]".to_string()),
        r => parts.push(format!("F[U]^{r}")),
    }
    let mut orders: Vec<u32> = h.torsion().iter().map(|t| t.0).collect();
    orders.sort_unstable();
    orders.dedup();
    for k in orders {
        let count = h.torsion().iter().filter(|t| t.0 == k).count();
        let quotient = if k == 1 { "(F[U]/U)".to_string() } else { format!("(F[U]/U^{k})") };
        parts.push(if count == 1 { quotient } else { format!("{quotient}^{count}") });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn u_times(chain: &cfk_core::Chain, k: u32) -> cfk_core::Chain {
    chain.iter().map(|(i, p)| (*i, p.mul_monomial(Monomial::u_power(k)))).collect()
}

pub fn homology_stage(report: &mut Report, s: &SurgeryComplex) -> Result<HomologyDecomposition> {
    let mut step = Step::new("homology", ["A0"]);
    let h = homology_fu(s).map_err(at("homology"))?;
    let hom = &h.homology;
    step.output("reduced_generators", hom.reduction().minimal.len())
        .output("module", module_shape(&h))
        .output("tower_rank", h.tower_rank());
    let gens: Vec<Value> = hom
        .generators()
        .iter()
        .map(|g| {
            json!({
                "cycle": g.name,
                "maslov": g.grading,
                "type": match g.order { None => "free".to_string(), Some(1) => "U-torsion".to_string(), Some(k) => format!("U^{k}-torsion") },
                "representative": s.complex.format_chain(&g.representative),
            })
        })
        .collect();
    step.output("classes", gens);
    step.certify("reduction-certificate", hom.reduction().verify().map_err(at("homology"))?);
    let smith_ok = hom.smith().verify(hom.reduction().minimal.differential()).map_err(at("homology"))?;
    step.certify("smith-form", smith_ok);
    let mut cycles = true;
    let mut orders = true;
    for g in hom.generators() {
        cycles &= s.complex.apply_differential(&g.representative).is_empty();
        let e = at("homology");
        orders &= match g.order {
            Some(k) => {
                hom.is_boundary(&u_times(&g.representative, k), g.grading - 2 * k as i64).map_err(e)?
                    && !hom
                        .is_boundary(&u_times(&g.representative, k - 1), g.grading - 2 * (k as i64 - 1))
                        .map_err(at("homology"))?
            }
            None => !hom.is_boundary(&u_times(&g.representative, 1), g.grading - 2).map_err(e)?,
        };
    }
    step.certify("representatives-are-cycles", cycles).certify("torsion-orders-exact", orders);
    report.steps.push(step);
    Ok(h)
}

pub fn table_stage(report: &mut Report, h: &HomologyDecomposition) -> Result<()> {
    let mut step = Step::new("table", ["H(A0)"]);
    let rows: Vec<Value> = induced_action_table(h)
        .into_iter()
        .map(|r| {
            json!({
                "cycles": r.class.trim_start_matches('[').trim_end_matches(']'),
                "homology class": match r.order { None => "free".to_string(), Some(1) => "U-torsion".to_string(), Some(k) => format!("U^{k}-torsion") },
                "image under ι": r.iota,
                "image under τ": r.tau,
            })
        })
        .collect();
    step.output("action_table", rows);
    step.output("id_plus_iota", matrix_rows(&h.iota_matrix.add(&F2Matrix::identity(h.iota_matrix.nrows()))));
    step.output("id_plus_tau", matrix_rows(&h.tau_matrix.add(&F2Matrix::identity(h.tau_matrix.nrows()))));
    report.steps.push(step);
    Ok(())
}

fn invariant_rows(h: &HomologyDecomposition, sym: Symmetries) -> Value {
    invariant_subspace_with(h, 0, sym)
        .into_iter()
        .map(|v| json!({ "class": v.name, "nontorsion": v.nontorsion }))
        .collect::<Vec<_>>()
        .into()
}

pub fn obstruct_stage(
    report: &mut Report,
    h: &HomologyDecomposition,
    shift: Rational64,
    sym: Symmetries,
) -> Result<ObstructionVerdict> {
    let mut step = Step::new("obstruct", ["H(A0)"]);
    let v = obstruct_decomposition(h, shift, sym).map_err(at("obstruct"))?;
    step.output("symmetries", sym.name()).output("invariant_subspace", invariant_rows(h, sym));
    step.output("status", v.status.name());
    step.certify("witness-classes-invariant", {
        let hom = &h.homology;
        v.witness.iter().all(|w| {
            let fixed_i = hom.act(&h.iota_matrix, &w.class) == w.class;
            let fixed_t = hom.act(&h.tau_matrix, &w.class) == w.class;
            match sym {
                Symmetries::Both => fixed_i && fixed_t,
                Symmetries::IotaOnly => fixed_i,
                Symmetries::TauOnly => fixed_t,
                Symmetries::TauIota => hom.act(&h.tau_matrix, &hom.act(&h.iota_matrix, &w.class)) == w.class,
            }
        })
    });
    report.steps.push(step);
    Ok(v)
}

/// The verdict under each weaker set of symmetries.
pub fn ablation_stage(report: &mut Report, h: &HomologyDecomposition, shift: Rational64) -> Result<()> {
    let mut step = Step::new("symmetry-ablation", ["H(A0)"]);
    let mut rows = Vec::new();
    for sym in [Symmetries::IotaOnly, Symmetries::TauOnly, Symmetries::TauIota] {
        let v = obstruct_decomposition(h, shift, sym).map_err(at("symmetry-ablation"))?;
        rows.push(
            json!({ "symmetries": sym.name(), "status": v.status.name(), "invariant_dimension": v.witness.len() }),
        );
    }
    step.output("verdicts", rows);
    report.steps.push(step);
    Ok(())
}

pub fn model_stage(report: &mut Report, h: &HomologyDecomposition, s: &SurgeryComplex) -> Result<StandardModel> {
    let mut step = Step::new("model", ["A0", "H(A0)"]);
    let m = standard_model(h, s).map_err(at("model"))?;
    let c = &m.surgery.complex;
    let labels: Vec<Value> = m.labels.iter().map(|(g, l)| json!({ "generator": g, "stands for": l })).collect();
    let boundaries: Vec<Value> = (0..c.len())
        .filter(|&i| !c.boundary(i).is_empty())
        .map(|i| json!({ "generator": c.id(i), "boundary": c.format_chain(c.boundary(i)) }))
        .collect();
    step.output("labels", labels).output("differential", boundaries);
    step.output("iota", map_images(&m.surgery.iota)).output("tau", map_images(&m.surgery.tau));
    step.certify("inclusion-chain-map", m.inclusion.is_chain_map());
    let e = at("model");
    let iota_ok = homotopic(
        &m.inclusion.compose(&m.surgery.iota).map_err(e)?,
        &s.iota.compose(&m.inclusion).map_err(at("model"))?,
    )
    .map_err(at("model"))?
    .is_some();
    let tau_ok = homotopic(
        &m.inclusion.compose(&m.surgery.tau).map_err(at("model"))?,
        &s.tau.compose(&m.inclusion).map_err(at("model"))?,
    )
    .map_err(at("model"))?
    .is_some();
    step.certify("inclusion-intertwines-iota", iota_ok).certify("inclusion-intertwines-tau", tau_ok);
    report.steps.push(step);
    Ok(m)
}

fn local_certificates(step: &mut Step, r: &cfk_core::LocalReport) {
    step.output("shift", rational(r.shift)).output("expected_shift", rational(r.expected_shift));
    let [a, b, c, d] = r.conditions();
    step.certify("grading-shift", a)
        .certify("tower-isomorphism", b)
        .certify("iota-homotopy", c)
        .certify("tau-homotopy", d);
}

pub fn local_stage(
    report: &mut Report,
    s: &SurgeryComplex,
    model: Option<&StandardModel>,
) -> Result<Option<GradedMap>> {
    let mut step = Step::new("local-to-trivial", ["A0"]);
    let found = find_local_map_to_trivial(s).map_err(at("local-to-trivial"))?;
    step.output("found", found.is_some());
    let out = match found {
        Some((f, r)) => {
            let nonzero = |f: &GradedMap| -> Value {
                f.describe()
                    .into_iter()
                    .filter(|(_, i)| i != "0")
                    .map(|(g, i)| json!({ "generator": g, "image": i }))
                    .collect::<Vec<_>>()
                    .into()
            };
            step.output("map", nonzero(&f));
            if let Some(m) = model {
                let on_model = f.compose(&m.inclusion).map_err(at("local-to-trivial"))?;
                step.output("map_on_model", nonzero(&on_model));
            }
            local_certificates(&mut step, &r);
            Some(f)
        }
        None => None,
    };
    report.steps.push(step);
    Ok(out)
}

/// `G = F^∨ : 1^∨ → A0^∨`, checked to be local.
pub fn dual_stage(report: &mut Report, s: &SurgeryComplex, f: &GradedMap) -> Result<()> {
    let mut step = Step::new("dualize", ["A0", "F"]);
    let e = "dualize";
    let trivial = SurgeryComplex::trivial();
    let ds = dual_surgery(s).map_err(at(e))?;
    let dt = dual_surgery(&trivial).map_err(at(e))?;
    let g = dual_surgery_map(f, &ds, &dt).map_err(at(e))?;
    step.output("dual_generators", ds.complex.len()).output("map", map_images(&g));
    step.certify("dual-valid", ds.check().is_ok());
    let r = verify_local(&dt, &ds, &g, Rational64::from_integer(0)).map_err(at(e))?;
    local_certificates(&mut step, &r);
    report.steps.push(step);
    Ok(())
}

/// The cobordism shift for `n`-surgery cancels the shift of the large
/// surgery identification.
pub fn shift_stage(report: &mut Report, s: &SurgeryComplex, n: i64) -> Result<()> {
    let e = "shift-cancellation";
    let mut step = Step::new(e, [format!("n = {n}")]);
    let data = intersection_form_w1n(n).map_err(at(e))?;
    let cobordism = cfk_core::cobordism_shift(n).map_err(at(e))?;
    let identification = -Rational64::new(n - 1, 4);
    let total = cobordism.shift + identification;
    step.output("n", n)
        .output("leading_minors", data.leading_minors.iter().map(|m| m.to_string()).collect::<Vec<_>>())
        .output("signature", data.signature)
        .output("euler_characteristic", data.euler_characteristic)
        .output("cobordism_shift", rational(cobordism.shift))
        .output("identification_shift", rational(identification))
        .output("total_shift", rational(total));
    step.certify("negative-definite", data.definite)
        .certify("even", data.spin_even)
        .certify("shift-from-form", data.shift == cobordism.shift)
        .certify("shifts-cancel", total == Rational64::from_integer(0));
    let shifted = Arc::new(s.complex.with_shift(cobordism.shift).map_err(at(e))?);
    let carry =
        |f: &GradedMap| GradedMap::new(shifted.clone(), shifted.clone(), f.mode(), f.degree(), f.entries().clone());
    let iota = carry(&s.iota).map_err(at(e))?;
    let tau = carry(&s.tau).map_err(at(e))?;
    let unnormalized = SurgeryComplex::new(shifted.clone(), iota, tau).map_err(at(e))?;
    let rejected = matches!(cfk_core::obstruct_equivariant_ball(&unnormalized), Err(cfk_core::Error::NotNormalized(_)));
    step.certify("unnormalized-input-rejected", rejected);
    report.steps.push(step);
    Ok(())
}

/// Dual and tensor maps on the standard model `M`: `F_M : M → 1` and its
/// dual are local, so is `G ⊗ G`, `M ⊗ M` is still obstructed, the
/// coevaluation class of `M^∨ ⊗ M` is invariant and nontorsion, and the
/// connected sum is unital and associative.
pub fn dual_tensor_stage(report: &mut Report, model: &StandardModel, f: &GradedMap) -> Result<()> {
    let e = "dual-and-tensor";
    let mut step = Step::new(e, ["M", "F"]);
    let m = &model.surgery;
    let trivial = SurgeryComplex::trivial();
    let zero = Rational64::from_integer(0);

    let f_m = f.compose(&model.inclusion).map_err(at(e))?;
    let r = verify_local(m, &trivial, &f_m, zero).map_err(at(e))?;
    step.certify("model-map-local", r.all_pass());

    let dm = dual_surgery(m).map_err(at(e))?;
    let dt = dual_surgery(&trivial).map_err(at(e))?;
    let g = dual_surgery_map(&f_m, &dm, &dt).map_err(at(e))?;
    let r = verify_local(&dt, &dm, &g, zero).map_err(at(e))?;
    step.certify("dual-map-local", r.all_pass());

    let source = connected_sum_surgery(&dt, &dt).map_err(at(e))?;
    let target = connected_sum_surgery(&dm, &dm).map_err(at(e))?;
    let gg = tensor_maps_between(&g, &g, &source.complex, &target.complex).map_err(at(e))?;
    let r = verify_local(&source, &target, &gg, zero).map_err(at(e))?;
    step.certify("tensor-of-dual-maps-local", r.all_pass());

    let sum = connected_sum_surgery(m, m).map_err(at(e))?;
    let hs = homology_fu(&sum).map_err(at(e))?;
    let v = obstruct_decomposition(&hs, sum.shift(), Symmetries::Both).map_err(at(e))?;
    step.output("sum_of_two_generators", sum.complex.len()).output("sum_of_two_module", module_shape(&hs));
    step.output("sum_of_two_status", v.status.name());
    step.certify("sum-of-two-obstructed", v.status == ObstructionStatus::Obstructed);

    let (pairing, coev) = coevaluation(m).map_err(at(e))?;
    let hp = homology_fu(&pairing).map_err(at(e))?;
    let class = hp.homology.class_of(&coev, 0).map_err(at(e))?;
    let invariant =
        hp.homology.act(&hp.iota_matrix, &class) == class && hp.homology.act(&hp.tau_matrix, &class) == class;
    step.certify("coevaluation-invariant-nontorsion", invariant && hp.homology.is_nontorsion(&class));

    let iso = SumIsomorphisms::build(m, &dt, &dm).map_err(at(e))?;
    step.certify("sum-unital-and-associative", iso.verify().map_err(at(e))?);
    step.output(
        "chain",
        vec![
            "F_M : M → 1 local",
            "G = F_M^∨ : 1 → M^∨ local",
            "G ⊗ G : 1 → M^∨ ⊗ M^∨ local",
            "M ⊗ M admits no invariant nontorsion class in grading 0",
            "coevaluation 1 → M^∨ ⊗ M hits an invariant nontorsion class",
        ],
    );
    report.steps.push(step);
    Ok(())
}

/// Every stage from an ι-complex to the obstruction, the local map to the
/// trivial complex and the dual-and-tensor chain.
pub fn knot_pipeline(report: &mut Report, k: &IotaComplex, opts: Options) -> Result<()> {
    let d = double_stage(report, k, opts)?;
    let s = a0_stage(report, &d)?;
    let h = homology_stage(report, &s)?;
    table_stage(report, &h)?;
    let verdict = obstruct_stage(report, &h, s.shift(), Symmetries::Both)?;
    ablation_stage(report, &h, s.shift())?;
    shift_stage(report, &s, SURGERY_COEFFICIENT)?;
    let model = model_stage(report, &h, &s)?;
    if let Some(f) = local_stage(report, &s, Some(&model))? {
        dual_stage(report, &s, &f)?;
        dual_tensor_stage(report, &model, &f)?;
    }
    report.verdict = Some(Verdict::from_obstruction(&verdict));
    Ok(())
}

pub fn theorem_pipeline(opts: Options) -> Result<Report> {
    let mut report = Report::new("pipeline", &["theorem-1.1".to_string()]);
    let k = builtin_stage(&mut report, BuiltinName::Fig8)?;
    knot_pipeline(&mut report, &k, opts)?;
    Ok(report)
}

/// `f ⊗ f^r` between the doubles, checked against τ and ι.
fn doubled_map_stage(
    report: &mut Report,
    k0: &IotaComplex,
    k1: &IotaComplex,
    f: &GradedMap,
    label: &str,
    opts: Options,
) -> Result<()> {
    let e = "doubled-local-map";
    let mut step = Step::new(e, [label]);
    let p0 = double_parts(k0, opts.convention).map_err(at(e))?;
    let p1 = double_parts(k1, opts.convention).map_err(at(e))?;
    let fr = reflect_map(f, &p0.right.complex, &p1.right.complex).map_err(at(e))?;
    let ff = tensor_maps_between(f, &fr, &p0.tensor, &p1.tensor).map_err(at(e))?;
    step.certify("chain-map", ff.is_chain_map());
    step.certify(
        "commutes-with-exchange",
        ff.compose(&p0.tau_exch).map_err(at(e))? == p1.tau_exch.compose(&ff).map_err(at(e))?,
    );
    let (d0, d1) = (&p0.result, &p1.result);
    let tau = homotopic(&ff.compose(&d0.tau).map_err(at(e))?, &d1.tau.compose(&ff).map_err(at(e))?).map_err(at(e))?;
    let iota =
        homotopic(&ff.compose(&d0.iota).map_err(at(e))?, &d1.iota.compose(&ff).map_err(at(e))?).map_err(at(e))?;
    step.certify("tau-homotopy", tau.is_some()).certify("iota-homotopy", iota.is_some());
    report.steps.push(step);
    Ok(())
}

/// A user knot complex with local maps to and from the figure-eight
/// complex: the maps are verified, then the knot runs the full pipeline.
pub fn thin_knot_pipeline(
    arguments: &[String],
    doc: &ComplexDocument,
    to_fig8: Option<&MapDocument>,
    from_fig8: Option<&MapDocument>,
    opts: Options,
) -> Result<Report> {
    let mut report = Report::new("pipeline", arguments);
    let k = match load_stage(&mut report, &doc.name, doc)? {
        Loaded::Knot(k) => k,
        other => return fail("load", format!("expected an ι-complex over F2[U,V], found a {}", other.kind())),
    };
    let fig8 = builtin_stage(&mut report, BuiltinName::Fig8)?;
    let e = "local-equivalence";
    let identity_to = MapDocument::identity(&k.complex);
    let identity_from = MapDocument::identity(&fig8.complex);
    let to = to_fig8.unwrap_or(&identity_to);
    let from = from_fig8.unwrap_or(&identity_from);
    let f = to.to_map(&k.complex, &fig8.complex)?;
    let g = from.to_map(&fig8.complex, &k.complex)?;
    let mut step = Step::new(e, [to.name.as_str(), from.name.as_str()]);
    let rf = verify_iota_local(&k, &fig8, &f).map_err(at(e))?;
    let rg = verify_iota_local(&fig8, &k, &g).map_err(at(e))?;
    for (dir, r) in [("to-fig8", &rf), ("from-fig8", &rg)] {
        step.certify(&format!("{dir}-chain-map"), r.chain_map)
            .certify(&format!("{dir}-grading-preserving"), r.grading_preserving)
            .certify(&format!("{dir}-iota-homotopy"), r.iota_homotopy)
            .certify(&format!("{dir}-localized-isomorphism"), r.localized_iso);
    }
    let ok = rf.all_pass() && rg.all_pass();
    report.steps.push(step);
    if !ok {
        return fail(e, "the supplied maps are not ι-local");
    }
    doubled_map_stage(&mut report, &k, &fig8, &f, &to.name, opts)?;
    doubled_map_stage(&mut report, &fig8, &k, &g, &from.name, opts)?;
    knot_pipeline(&mut report, &k, opts)?;
    Ok(report)
}

/// Resolves a builtin name or a document path.
pub type Resolver<'a> = dyn Fn(&str) -> Result<(String, ComplexDocument)> + 'a;

fn split_op(op: &str) -> Result<(&str, Option<&str>)> {
    match op.split_once('(') {
        Some((name, rest)) => match rest.strip_suffix(')') {
            Some(arg) => Ok((name.trim(), Some(arg.trim()))),
            None => fail("custom", format!("unbalanced operation `{op}`")),
        },
        None => Ok((op.trim(), None)),
    }
}

enum State {
    Empty,
    Loaded(Loaded),
    Homology(SurgeryComplex, HomologyDecomposition),
}

fn load_source(report: &mut Report, source: &str, resolve: &Resolver) -> Result<Loaded> {
    match source.parse::<BuiltinName>() {
        Ok(name) => Ok(Loaded::Knot(builtin_stage(report, name)?)),
        Err(_) => {
            let (label, doc) = resolve(source)?;
            load_stage(report, &label, &doc)
        }
    }
}

fn surgery_of(report: &mut Report, state: State, opts: Options) -> Result<(SurgeryComplex, HomologyDecomposition)> {
    match state {
        State::Homology(s, h) => Ok((s, h)),
        State::Loaded(l) => {
            let s = lift_to_surgery(report, l, opts)?;
            let h = homology_stage(report, &s)?;
            Ok((s, h))
        }
        State::Empty => fail("custom", "no complex loaded"),
    }
}

/// Runs an explicit list of operations such as `double(unknot)`,
/// `obstruct`, `table` or `obstruct(iota)`.
pub fn custom_pipeline(arguments: &[String], ops: &[String], resolve: &Resolver, opts: Options) -> Result<Report> {
    let mut report = Report::new("pipeline", arguments);
    let mut state = State::Empty;
    let mut verdict = None;
    for op in ops {
        let (name, arg) = split_op(op)?;
        state = match (name, arg) {
            ("builtin" | "load", Some(src)) => State::Loaded(load_source(&mut report, src, resolve)?),
            ("double", src) => {
                let loaded = match (src, state) {
                    (Some(src), _) => load_source(&mut report, src, resolve)?,
                    (None, State::Loaded(l)) => l,
                    _ => return fail("double", "nothing to double"),
                };
                let Loaded::Knot(k) = loaded else {
                    return fail("double", "doubling needs an ι-complex over F2[U,V]");
                };
                State::Loaded(Loaded::KnotWithTau(double_stage(&mut report, &k, opts)?))
            }
            ("a0", None) => match state {
                State::Loaded(l) => State::Loaded(Loaded::Surgery(lift_to_surgery(&mut report, l, opts)?)),
                _ => return fail("a0", "no knot complex loaded"),
            },
            ("homology", None) => {
                let (s, h) = surgery_of(&mut report, state, opts)?;
                State::Homology(s, h)
            }
            ("table", None) => {
                let (s, h) = surgery_of(&mut report, state, opts)?;
                table_stage(&mut report, &h)?;
                State::Homology(s, h)
            }
            ("obstruct", sym) => {
                let sym = match sym {
                    Some(s) => s.parse::<Symmetries>().map_err(at("obstruct"))?,
                    None => Symmetries::Both,
                };
                let (s, h) = surgery_of(&mut report, state, opts)?;
                verdict = Some(obstruct_stage(&mut report, &h, s.shift(), sym)?);
                State::Homology(s, h)
            }
            ("local-to-trivial", None) => {
                let (s, h) = surgery_of(&mut report, state, opts)?;
                let model = model_stage(&mut report, &h, &s)?;
                if let Some(f) = local_stage(&mut report, &s, Some(&model))? {
                    dual_stage(&mut report, &s, &f)?;
                }
                State::Homology(s, h)
            }
            ("model", None) => {
                let (s, h) = surgery_of(&mut report, state, opts)?;
                model_stage(&mut report, &h, &s)?;
                State::Homology(s, h)
            }
            _ => return fail("custom", format!("unknown operation `{op}`")),
        };
    }
    report.verdict = match verdict {
        Some(v) => Some(Verdict::from_obstruction(&v)),
        None if report.steps.is_empty() => None,
        None => Some(Verdict::Property {
            holds: report.all_certificates_pass(),
            summary: "all certificates of the listed operations".into(),
        }),
    };
    Ok(report)
}

/// The dual of whatever a document describes.
pub fn dual_loaded(loaded: &Loaded) -> Result<Loaded> {
    let e = "dual";
    Ok(match loaded {
        Loaded::Bare(c) => Loaded::Bare(Arc::new(cfk_core::dual_complex(c).map_err(at(e))?)),
        Loaded::Knot(k) => {
            let (c, maps) = dualize(&k.complex, std::slice::from_ref(&k.iota)).map_err(at(e))?;
            Loaded::Knot(IotaComplex::new(c, maps[0].clone()).map_err(at(e))?)
        }
        Loaded::KnotWithTau(k) => {
            let (c, maps) = dualize(&k.complex, &[k.iota.clone(), k.tau.clone()]).map_err(at(e))?;
            Loaded::KnotWithTau(IotaTauComplex::new(c, maps[0].clone(), maps[1].clone()).map_err(at(e))?)
        }
        Loaded::Surgery(s) => Loaded::Surgery(dual_surgery(s).map_err(at(e))?),
    })
}

/// Connected sum of two surgery complexes, or the plain tensor product.
pub fn tensor_loaded(a: &Loaded, b: &Loaded) -> Result<(Loaded, bool)> {
    let e = "tensor";
    Ok(match (a, b) {
        (Loaded::Surgery(s1), Loaded::Surgery(s2)) => {
            (Loaded::Surgery(connected_sum_surgery(s1, s2).map_err(at(e))?), true)
        }
        _ => {
            let c = tensor_complex(a.complex(), b.complex()).map_err(at(e))?;
            (Loaded::Bare(Arc::new(c)), false)
        }
    })
}
