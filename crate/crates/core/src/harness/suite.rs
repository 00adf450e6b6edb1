//! The generated verification suite.

use crate::error::{Error, Result};
use crate::harness::check::{check_instance_with, CheckReport};
use crate::harness::generate::{generate_instance, GenParams};
use crate::harness::instance::Instance;
use crate::harness::report::ComplexityReport;
use crate::unfold::{audit, PieceKind, Unfolder};
use crate::Strategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub count: usize,
    /// Largest accepted global automaton.
    pub max_states: usize,
    pub max_actions: usize,
    pub maxlen: usize,
    pub cap: usize,
    /// Path length for the exhaustive piece audits.
    pub path_len: usize,
    /// Piece audits run only when the source has at most this many states.
    pub path_audit_states: usize,
    /// Bound on the states materialized when building every piece; larger
    /// instances are skipped.
    pub piece_limit: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            count: 20,
            max_states: 6,
            max_actions: 3,
            maxlen: 6,
            cap: 100_000,
            path_len: 8,
            path_audit_states: 3,
            piece_limit: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteInstance {
    pub params: GenParams,
    pub instance: Instance,
}

#[derive(Clone, Debug, Default)]
pub struct Suite {
    pub instances: Vec<SuiteInstance>,
    /// Seeds whose pieces exceeded [`SuiteParams::piece_limit`].
    pub too_large: Vec<u64>,
}

/// Walks seeds from 0 and keeps the first `count` generated instances
/// with between 2 and `max_states` global states whose pieces fit in
/// `piece_limit`. Alphabet sizes alternate between 2 and `max_actions`.
pub fn suite_instances(params: &SuiteParams) -> Result<Suite> {
    let mut suite = Suite::default();
    let mut seed = 0u64;
    let sizes: Vec<usize> = (2.min(params.max_actions)..=params.max_actions).collect();
    while suite.instances.len() < params.count {
        let actions = sizes[seed as usize % sizes.len()];
        let local_states = 1 + (seed as usize / sizes.len()) % 3;
        let gen = GenParams::new(seed, local_states, actions);
        seed += 1;
        let instance = generate_instance(&gen)?.validate()?;
        let a = &instance.automaton;
        if a.len() < 2 || a.len() > params.max_states {
            continue;
        }
        let mut u = Unfolder::new(&instance.alphabet, a)?.with_state_limit(params.piece_limit);
        match u.build_all() {
            Ok(()) => suite.instances.push(SuiteInstance {
                params: gen,
                instance,
            }),
            Err(Error::CapExceeded(_)) => suite.too_large.push(gen.seed),
            Err(e) => return Err(e),
        }
    }
    Ok(suite)
}

#[derive(Clone, Debug)]
pub struct InstanceVerdict {
    pub complexity: ComplexityReport,
    /// Path audit violations over all triangles and connected boxes, or
    /// `None` when the instance is too large for the audit.
    pub path_violations: Option<usize>,
    pub link_violations: usize,
    pub connected_boxes: usize,
    pub check: CheckReport,
}

pub fn verify_instance(
    instance: &Instance,
    params: &SuiteParams,
    strategy: Strategy,
) -> Result<InstanceVerdict> {
    let mut u = Unfolder::new(&instance.alphabet, &instance.automaton)?
        .with_state_limit(params.piece_limit);
    let complexity = ComplexityReport::from_unfolder(&mut u, instance.distribution.len())?;
    let audited =
        instance.automaton.len() <= params.path_audit_states && instance.alphabet.len() <= 3;
    let path_violations = audited.then(|| {
        let tri: usize = u
            .triangles()
            .map(|t| audit::triangle_path_violations(t, params.path_len).len())
            .sum();
        let boxes: usize = u
            .boxes()
            .filter(|b| b.kind() == PieceKind::ConnectedBox)
            .map(|b| audit::box_path_violations(b, params.path_len).len())
            .sum();
        tri + boxes
    });
    let link_violations = u
        .connected_logs()
        .iter()
        .map(|log| audit::link_violations(log).len())
        .sum();
    let check = check_instance_with(instance, params.maxlen, params.cap, strategy)?;
    Ok(InstanceVerdict {
        complexity,
        path_violations,
        link_violations,
        connected_boxes: u.connected_logs().len(),
        check,
    })
}

/// Verifies every instance; instances run concurrently under
/// [`Strategy::Parallel`], each one sequentially.
pub fn run_suite(
    instances: &[SuiteInstance],
    params: &SuiteParams,
    strategy: Strategy,
) -> Vec<Result<InstanceVerdict>> {
    strategy.map(instances, |s| {
        verify_instance(&s.instance, params, Strategy::Sequential)
    })
}
