//! Bounded validity and consequence checking by model search, plus the
//! axiom-soundness suite.
//!
//! Checks are sound refuters, not decision procedures: a
//! [`Verdict::CountermodelFound`] is a genuine countermodel, while
//! [`Verdict::ValidWithinBounds`] only says no countermodel exists inside
//! the searched space (every model of the class up to `max_worlds`, and
//! optionally a seeded random sample on top).
//!
//! Three model classes are supported: `Preference` (reflexive and
//! ∧-transitive relations, the full modal repertoire), `GeneralFuzzy`
//! (arbitrary chain-valued relations), and `GeneralCrisp` (two-valued
//! relations).  The general classes reject strict modalities, which are
//! only defined on preference models.
//!
//! The soundness suite instantiates every axiom schema of a system with
//! formulas from a fixed pool.  For speed it first checks the schema
//! *template*, with its metavariables treated as free propositional
//! variables, against the whole model class: any valuation of a
//! metavariable realises every value vector a pool formula could take, so
//! a valid template makes all its pool instances valid on the same class
//! (the substitution property of valuation-closed classes).  Only when a
//! template fails does the suite fall back to checking each pool instance
//! separately, reporting per-instance countermodels.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::lattice::{Chain, Element};
use crate::model::{GeneralModel, LocalVerdict, ModelError, PreferenceModel};
use crate::proofs::{schema_catalog, SystemId};
use crate::relation::FuzzyRelation;
use crate::syntax::Formula;

/// Which models the search ranges over.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ModelClass {
    /// Reflexive, ∧-transitive chain-valued relations.
    Preference,
    /// Arbitrary chain-valued relations.
    GeneralFuzzy,
    /// Arbitrary two-valued relations.
    GeneralCrisp,
}

impl ModelClass {
    /// Canonical name.
    pub fn name(self) -> &'static str {
        match self {
            ModelClass::Preference => "preference",
            ModelClass::GeneralFuzzy => "general-fuzzy",
            ModelClass::GeneralCrisp => "general-crisp",
        }
    }

    /// Parses a class name, case-insensitively.
    pub fn from_name(name: &str) -> Option<ModelClass> {
        match name.to_lowercase().as_str() {
            "preference" => Some(ModelClass::Preference),
            "general-fuzzy" => Some(ModelClass::GeneralFuzzy),
            "general-crisp" => Some(ModelClass::GeneralCrisp),
            _ => None,
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bounds and knobs for a search.
#[derive(Clone, Debug)]
pub struct SearchBounds {
    /// The chain models are valued in.
    pub chain: Chain,
    /// Largest number of worlds (exhaustive and random phases).
    pub max_worlds: usize,
    /// Variables every model assigns, besides those of the checked
    /// formulas.
    pub variables: Vec<String>,
    /// Whether to enumerate the whole bounded space.
    pub enumerate_exhaustively: bool,
    /// Extra random models to try after the exhaustive phase.
    pub random_samples: usize,
    /// Seed for the random phase.
    pub seed: u64,
    /// The model class searched.
    pub model_class: ModelClass,
    /// Upper bound on the exhaustive-phase model count (pre-filter).
    pub budget: u64,
}

impl SearchBounds {
    /// Defaults: three worlds, variables `p` and `q`, exhaustive, no
    /// random samples, preference models, a fifty-million-model budget.
    pub fn new(chain: Chain) -> SearchBounds {
        SearchBounds {
            chain,
            max_worlds: 3,
            variables: vec!["p".to_string(), "q".to_string()],
            enumerate_exhaustively: true,
            random_samples: 0,
            seed: 0,
            model_class: ModelClass::Preference,
            budget: 50_000_000,
        }
    }
}

/// Search failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    /// The exhaustive phase would visit more candidates than allowed.
    BudgetExceeded {
        /// Candidate models implied by the bounds.
        needed: u128,
        /// The configured budget.
        budget: u64,
    },
    /// A formula could not be evaluated on a model of the class (e.g. a
    /// strict modality on a general model).
    Model(ModelError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::BudgetExceeded { needed, budget } => write!(
                f,
                "budget-exceeded: bounds imply {needed} candidate models (budget {budget})"
            ),
            SearchError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SearchError {}

impl From<ModelError> for SearchError {
    fn from(e: ModelError) -> SearchError {
        SearchError::Model(e)
    }
}

/// A model from either class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyModel {
    /// A preference model.
    Preference(PreferenceModel),
    /// A general model.
    General(GeneralModel),
}

impl AnyModel {
    /// The underlying chain.
    pub fn chain(&self) -> &Chain {
        match self {
            AnyModel::Preference(m) => m.chain(),
            AnyModel::General(m) => m.chain(),
        }
    }

    /// World names in index order.
    pub fn worlds(&self) -> &[String] {
        match self {
            AnyModel::Preference(m) => m.worlds(),
            AnyModel::General(m) => m.worlds(),
        }
    }

    /// The accessibility relation.
    pub fn relation(&self) -> &FuzzyRelation {
        match self {
            AnyModel::Preference(m) => m.relation(),
            AnyModel::General(m) => m.relation(),
        }
    }

    /// The valuation.
    pub fn valuation(&self) -> &BTreeMap<String, Vec<Element>> {
        match self {
            AnyModel::Preference(m) => m.valuation(),
            AnyModel::General(m) => m.valuation(),
        }
    }

    /// Evaluates `f` at every world.
    pub fn eval_all(&self, f: &Formula) -> Result<Vec<Element>, ModelError> {
        match self {
            AnyModel::Preference(m) => m.eval_all(f),
            AnyModel::General(m) => m.eval_all(f),
        }
    }

    /// Local consequence on this model.
    pub fn holds_locally(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<LocalVerdict, ModelError> {
        match self {
            AnyModel::Preference(m) => m.holds_locally(premises, conclusion),
            AnyModel::General(m) => m.holds_locally(premises, conclusion),
        }
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No countermodel exists within the searched space.
    ValidWithinBounds,
    /// A genuine countermodel.
    CountermodelFound {
        /// The refuting model.
        model: AnyModel,
        /// The world where the check fails.
        world: usize,
    },
}

impl Verdict {
    /// True when no countermodel was found.
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::ValidWithinBounds)
    }
}

fn world_names(w: usize) -> Vec<String> {
    (0..w).map(|i| format!("w{i}")).collect()
}

/// Pre-filter candidate count for one world size.
fn candidates(class: ModelClass, n: u128, w: u128, nvars: u32) -> u128 {
    let rel_cells = match class {
        ModelClass::Preference => w * w - w,
        ModelClass::GeneralFuzzy | ModelClass::GeneralCrisp => w * w,
    };
    let base: u128 = if class == ModelClass::GeneralCrisp { 2 } else { n };
    let rels = base.checked_pow(rel_cells as u32).unwrap_or(u128::MAX);
    let vals = n.checked_pow((w as u32).saturating_mul(nvars)).unwrap_or(u128::MAX);
    rels.saturating_mul(vals)
}

fn check_budget(bounds: &SearchBounds, nvars: usize) -> Result<(), SearchError> {
    let n = bounds.chain.size() as u128;
    let mut needed: u128 = 0;
    for w in 1..=bounds.max_worlds {
        needed = needed.saturating_add(candidates(
            bounds.model_class,
            n,
            w as u128,
            nvars as u32,
        ));
    }
    if needed > bounds.budget as u128 {
        return Err(SearchError::BudgetExceeded { needed, budget: bounds.budget });
    }
    Ok(())
}

/// All admissible relations of the class on `w` worlds.
fn admissible_relations(chain: &Chain, class: ModelClass, w: usize) -> Vec<FuzzyRelation> {
    let n = chain.size();
    let top = chain.top();
    let mut out = Vec::new();
    match class {
        ModelClass::Preference => {
            // Off-diagonal cells, row-major; the diagonal is forced to 1.
            let cells: Vec<(usize, usize)> = (0..w)
                .flat_map(|u| (0..w).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v)
                .collect();
            let mut digits = vec![0usize; cells.len()];
            loop {
                let rel = FuzzyRelation::from_fn(w, |u, v| {
                    if u == v {
                        top
                    } else {
                        let pos = cells.iter().position(|&c| c == (u, v)).expect("off-diagonal");
                        chain.element_at(digits[pos]).expect("digit in range")
                    }
                });
                if rel.is_meet_transitive() {
                    out.push(rel);
                }
                if !advance(&mut digits, n) {
                    break;
                }
            }
        }
        ModelClass::GeneralFuzzy | ModelClass::GeneralCrisp => {
            let base = if class == ModelClass::GeneralCrisp { 2 } else { n };
            let mut digits = vec![0usize; w * w];
            loop {
                let rel = FuzzyRelation::from_fn(w, |u, v| {
                    let d = digits[u * w + v];
                    let index = if class == ModelClass::GeneralCrisp {
                        if d == 0 { 0 } else { n - 1 }
                    } else {
                        d
                    };
                    chain.element_at(index).expect("digit in range")
                });
                out.push(rel);
                if !advance(&mut digits, base) {
                    break;
                }
            }
        }
    }
    out
}

/// Advances a little-endian odometer; false when it wraps to all zeros.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn build_model(
    chain: &Chain,
    class: ModelClass,
    relation: FuzzyRelation,
    vars: &[String],
    val_digits: &[usize],
) -> AnyModel {
    let w = relation.size();
    let valuation: BTreeMap<String, Vec<Element>> = vars
        .iter()
        .enumerate()
        .map(|(i, var)| {
            let row = (0..w)
                .map(|j| chain.element_at(val_digits[i * w + j]).expect("digit in range"))
                .collect();
            (var.clone(), row)
        })
        .collect();
    let worlds = world_names(w);
    match class {
        ModelClass::Preference => AnyModel::Preference(
            PreferenceModel::new(chain.clone(), worlds, relation, valuation)
                .expect("admissible by construction"),
        ),
        _ => AnyModel::General(
            GeneralModel::new(chain.clone(), worlds, relation, valuation)
                .expect("shape is correct by construction"),
        ),
    }
}

/// Lazily yields every model of the class with up to `max_worlds` worlds,
/// valuations ranging over `bounds.variables`.
pub struct ModelIter<'a> {
    bounds: &'a SearchBounds,
    vars: Vec<String>,
    w: usize,
    relations: Vec<FuzzyRelation>,
    rel_idx: usize,
    val_digits: Vec<usize>,
    fresh_valuation: bool,
    done: bool,
}

impl<'a> ModelIter<'a> {
    fn new(bounds: &'a SearchBounds, vars: Vec<String>) -> ModelIter<'a> {
        let mut iter = ModelIter {
            bounds,
            vars,
            w: 0,
            relations: Vec::new(),
            rel_idx: 0,
            val_digits: Vec::new(),
            fresh_valuation: true,
            done: bounds.max_worlds == 0,
        };
        iter.enter_next_size();
        iter
    }

    fn enter_next_size(&mut self) {
        loop {
            self.w += 1;
            if self.w > self.bounds.max_worlds {
                self.done = true;
                return;
            }
            self.relations =
                admissible_relations(&self.bounds.chain, self.bounds.model_class, self.w);
            if !self.relations.is_empty() {
                self.rel_idx = 0;
                self.val_digits = vec![0; self.vars.len() * self.w];
                self.fresh_valuation = true;
                return;
            }
        }
    }
}

impl Iterator for ModelIter<'_> {
    type Item = AnyModel;

    fn next(&mut self) -> Option<AnyModel> {
        if self.done {
            return None;
        }
        if !self.fresh_valuation && !advance(&mut self.val_digits, self.bounds.chain.size()) {
            self.rel_idx += 1;
            if self.rel_idx == self.relations.len() {
                self.enter_next_size();
                if self.done {
                    return None;
                }
            }
        }
        self.fresh_valuation = false;
        Some(build_model(
            &self.bounds.chain,
            self.bounds.model_class,
            self.relations[self.rel_idx].clone(),
            &self.vars,
            &self.val_digits,
        ))
    }
}

/// Enumerates every model within the bounds (over `bounds.variables`),
/// after checking the candidate count against the budget.
pub fn enumerate_models(bounds: &SearchBounds) -> Result<ModelIter<'_>, SearchError> {
    check_budget(bounds, bounds.variables.len())?;
    Ok(ModelIter::new(bounds, bounds.variables.clone()))
}

fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// Draws one random model of the class with exactly `w` worlds.
fn sample_model(
    rng: &mut ChaCha8Rng,
    chain: &Chain,
    class: ModelClass,
    w: usize,
    vars: &[String],
) -> AnyModel {
    let n = chain.size();
    let relation = match class {
        ModelClass::Preference => {
            let raw = FuzzyRelation::from_fn(w, |_, _| {
                chain.element_at(pick(rng, n)).expect("in range")
            });
            let mut closed = raw.meet_transitive_closure();
            for u in 0..w {
                closed.set(u, u, chain.top());
            }
            closed
        }
        ModelClass::GeneralFuzzy => {
            FuzzyRelation::from_fn(w, |_, _| chain.element_at(pick(rng, n)).expect("in range"))
        }
        ModelClass::GeneralCrisp => FuzzyRelation::from_fn(w, |_, _| {
            if pick(rng, 2) == 0 { chain.bottom() } else { chain.top() }
        }),
    };
    let digits: Vec<usize> = (0..vars.len() * w).map(|_| pick(rng, n)).collect();
    build_model(chain, class, relation, vars, &digits)
}

/// The union of `bounds.variables` and the variables of the formulas.
fn search_vars(bounds: &SearchBounds, formulas: &[&Formula]) -> Vec<String> {
    let mut set: BTreeSet<String> = bounds.variables.iter().cloned().collect();
    for f in formulas {
        set.extend(f.variables());
    }
    set.into_iter().collect()
}

fn refute<F>(bounds: &SearchBounds, vars: Vec<String>, mut check: F) -> Result<Verdict, SearchError>
where
    F: FnMut(&AnyModel) -> Result<Option<usize>, ModelError>,
{
    if bounds.enumerate_exhaustively {
        check_budget(bounds, vars.len())?;
        for model in ModelIter::new(bounds, vars.clone()) {
            if let Some(world) = check(&model)? {
                return Ok(Verdict::CountermodelFound { model, world });
            }
        }
    }
    if bounds.random_samples > 0 && bounds.max_worlds > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
        for _ in 0..bounds.random_samples {
            let w = 1 + pick(&mut rng, bounds.max_worlds);
            let model =
                sample_model(&mut rng, &bounds.chain, bounds.model_class, w, &vars);
            if let Some(world) = check(&model)? {
                return Ok(Verdict::CountermodelFound { model, world });
            }
        }
    }
    Ok(Verdict::ValidWithinBounds)
}

/// Searches for a model and world where `f` is not fully true.  Variables
/// of `f` extend `bounds.variables` for the enumeration.
pub fn is_valid_bounded(f: &Formula, bounds: &SearchBounds) -> Result<Verdict, SearchError> {
    let top = bounds.chain.top();
    refute(bounds, search_vars(bounds, &[f]), |model| {
        Ok(model.eval_all(f)?.iter().position(|&x| x != top))
    })
}

/// Searches for a model violating the local consequence: some world where
/// every premise is fully true but the conclusion is not.
pub fn consequence_bounded(
    premises: &[Formula],
    conclusion: &Formula,
    bounds: &SearchBounds,
) -> Result<Verdict, SearchError> {
    let mut all: Vec<&Formula> = premises.iter().collect();
    all.push(conclusion);
    refute(bounds, search_vars(bounds, &all), |model| {
        Ok(model.holds_locally(premises, conclusion)?.witness)
    })
}

/// One suite check: a labelled concrete formula with its verdict.
#[derive(Clone, Debug)]
pub struct SuiteEntry {
    /// Schema id with parameters and pool substitution, e.g.
    /// `k(0.5){p; p -> q}`, or an extra check's name.
    pub label: String,
    /// The instantiated formula.
    pub formula: Formula,
    /// The verdict for this instance.
    pub verdict: Verdict,
}

/// Outcome of [`axiom_soundness_suite`].
#[derive(Clone, Debug)]
pub struct SuiteReport {
    /// The system whose catalog was instantiated.
    pub system: SystemId,
    /// The model class searched (picked per system).
    pub class: ModelClass,
    /// Every instance with its verdict.
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    /// True when every instance is valid within bounds.
    pub fn all_valid(&self) -> bool {
        self.entries.iter().all(|e| e.verdict.is_valid())
    }

    /// The failing entries.
    pub fn failures(&self) -> Vec<&SuiteEntry> {
        self.entries.iter().filter(|e| !e.verdict.is_valid()).collect()
    }
}

/// The instantiation pool: `p`, `q`, `p -> q`, `p & q`, and the co-atom
/// constant.
fn pool(chain: &Chain) -> Vec<Formula> {
    let p = || Formula::var("p");
    let q = || Formula::var("q");
    vec![p(), q(), p().imp(q()), p().and(q()), Formula::constant(chain.coatom())]
}

/// The sound model class for each system: the ungraded monotone system is
/// checked over arbitrary fuzzy frames, the ungraded normal system over
/// crisp frames, and the graded systems over preference models.
pub fn suite_class(system: SystemId) -> ModelClass {
    match system {
        SystemId::M => ModelClass::GeneralFuzzy,
        SystemId::Cm => ModelClass::GeneralCrisp,
        _ => ModelClass::Preference,
    }
}

/// Instantiates every axiom schema of `system` over the pool and checks
/// each instance for validity within the bounds.  The model class is
/// chosen by [`suite_class`] (fuzzy-frame enumeration is clamped to two
/// worlds to stay inside the budget); `bounds.variables` is ignored in
/// favour of each instance's own variables.  Extra entries cover the
/// derived interaction law `sbox(b) p -> box(b) sbox(b) box(b) p` and the
/// global monotonicity bridge `A (p -> q) -> A (dia p -> dia q)`.
pub fn axiom_soundness_suite(
    system: SystemId,
    bounds: &SearchBounds,
) -> Result<SuiteReport, SearchError> {
    let class = suite_class(system);
    let chain = &bounds.chain;
    let mut inner = bounds.clone();
    inner.model_class = class;
    inner.variables = Vec::new();
    inner.enumerate_exhaustively = true;
    if class == ModelClass::GeneralFuzzy {
        inner.max_worlds = inner.max_worlds.min(2);
    }

    let pool = pool(chain);
    let metavars = ["?1", "?2"];
    let mut entries = Vec::new();

    for entry in schema_catalog(system, chain) {
        let schema = entry.schema;
        for params in &entry.params {
            let template = schema.template(params, chain);
            let param_part = if params.is_empty() {
                String::new()
            } else {
                let labels: Vec<&str> = params.iter().map(|&b| chain.label(b)).collect();
                format!("({})", labels.join(","))
            };
            let m = schema.metavar_count();

            // Template check: metavariables as free variables range over
            // every value vector, so validity here covers every pool
            // instance at once.
            let template_verdict = is_valid_bounded(&template, &inner)?;

            // Pool assignments, one slot per metavariable.
            let mut picks = vec![0usize; m];
            loop {
                let env: BTreeMap<String, Formula> = metavars[..m]
                    .iter()
                    .zip(&picks)
                    .map(|(mv, &i)| (mv.to_string(), pool[i].clone()))
                    .collect();
                let instance = template.substitute(&env);
                let pool_part = if m == 0 {
                    String::new()
                } else {
                    let shown: Vec<String> =
                        picks.iter().map(|&i| crate::syntax::print(&pool[i], chain)).collect();
                    format!("{{{}}}", shown.join("; "))
                };
                let verdict = if template_verdict.is_valid() {
                    Verdict::ValidWithinBounds
                } else {
                    is_valid_bounded(&instance, &inner)?
                };
                entries.push(SuiteEntry {
                    label: format!("{}{}{}", schema.id_str(), param_part, pool_part),
                    formula: instance,
                    verdict,
                });
                if m == 0 || !advance(&mut picks, pool.len()) {
                    break;
                }
            }
        }
    }

    // Derived interaction law, per positive level.
    if system.in_strict_family() {
        for b in chain.positive_elements() {
            let p = Formula::var("p");
            let eq1 = p
                .clone()
                .sbox_at(b)
                .imp(p.box_at(b).sbox_at(b).box_at(b));
            let verdict = is_valid_bounded(&eq1, &inner)?;
            entries.push(SuiteEntry {
                label: format!("eq1({})", chain.label(b)),
                formula: eq1,
                verdict,
            });
        }
    }

    // Global monotonicity bridge (evaluable on every class).
    let p = || Formula::var("p");
    let q = || Formula::var("q");
    let bridge = p()
        .imp(q())
        .univ()
        .imp(p().fuzzy_dia().imp(q().fuzzy_dia()).univ());
    let verdict = is_valid_bounded(&bridge, &inner)?;
    entries.push(SuiteEntry { label: "mono-bridge".to_string(), formula: bridge, verdict });

    Ok(SuiteReport { system, class, entries })
}

impl SystemId {
    /// Whether the system speaks about the strict boxes.
    fn in_strict_family(self) -> bool {
        matches!(self, SystemId::P | SystemId::PDelta)
    }
}
