use std::collections::BTreeMap;
use std::time::Instant;

use super::report::{Decomposition, FactorDescriptor, TheoremReport, Verdict};
use super::{lemmas, LemmaConfig, TheoremError};
use crate::arith::{self, IntSet};
use crate::invariants::class_size_set;
use crate::perm::{Group, GroupError, Permutation, Subgroup, DEFAULT_NORMAL_BUDGET};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub normal_budget: u64,
    /// Report every decomposition instead of the first per factorization.
    pub all_decompositions: bool,
    /// Run the lemma suite as part of the report.
    pub lemmas: Option<LemmaConfig>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            normal_budget: DEFAULT_NORMAL_BUDGET,
            all_decompositions: false,
            lemmas: None,
        }
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Detects the hypotheses on `g` and, when they hold, searches the normal
/// subgroups for `G = A × B` with `N(A) = Ω` and `N(B) = {1, n}`.
///
/// A budget overrun in the normal-subgroup search is returned as an error;
/// the verdict is never guessed.
pub fn verify_main_theorem(
    g: &Group,
    name: &str,
    config: &VerifyConfig,
) -> Result<TheoremReport, TheoremError> {
    let mut timings = BTreeMap::new();

    let start = Instant::now();
    let n_of_g = class_size_set(g);
    timings.insert("classes".to_string(), elapsed_ms(start));

    let start = Instant::now();
    let factorizations = arith::find_hypothesis_factorizations(&n_of_g.sizes)?;
    timings.insert("factorizations".to_string(), elapsed_ms(start));

    let mut decompositions = Vec::new();
    let verdict = if factorizations.is_empty() {
        Verdict::HypothesisNotMet
    } else {
        let start = Instant::now();
        let normals = g.normal_subgroups(config.normal_budget)?;
        timings.insert("normal_subgroups".to_string(), elapsed_ms(start));

        let start = Instant::now();
        let mut sizes: Vec<Option<IntSet>> = vec![None; normals.len()];
        let mut class_sizes = |i: usize| -> Result<IntSet, GroupError> {
            if sizes[i].is_none() {
                sizes[i] = Some(class_size_set(&g.subgroup_as_group(&normals[i])?).sizes);
            }
            Ok(sizes[i].clone().expect("filled"))
        };

        let mut all_found = true;
        for f in &factorizations {
            let pair = IntSet::from_values([1, f.n])?;
            let mut found_here = 0;
            // B ascending by order; normals are sorted that way.
            'search: for (bi, b) in normals.iter().enumerate() {
                if g.order() % b.order() != 0 {
                    continue;
                }
                let a_order = g.order() / b.order();
                for (ai, a) in normals.iter().enumerate() {
                    if a.order() != a_order || a.intersection_order(b) != 1 {
                        continue;
                    }
                    if class_sizes(bi)? != pair || class_sizes(ai)? != f.omega {
                        continue;
                    }
                    debug_assert!(g.is_internal_direct_product(a, b)?);
                    decompositions.push(Decomposition {
                        omega: f.omega.clone(),
                        n: f.n,
                        a: describe(g, a, class_sizes(ai)?),
                        b: describe(g, b, class_sizes(bi)?),
                        n_is_prime_power: arith::is_prime_power(f.n),
                    });
                    found_here += 1;
                    if !config.all_decompositions {
                        break 'search;
                    }
                }
            }
            if found_here == 0 {
                all_found = false;
            }
        }
        timings.insert("decomposition_search".to_string(), elapsed_ms(start));

        if all_found && decompositions.iter().all(|d| d.n_is_prime_power) {
            Verdict::VerifiedDecomposition
        } else {
            Verdict::Counterexample
        }
    };

    let lemma_results = match &config.lemmas {
        Some(lc) => {
            let start = Instant::now();
            let results = lemmas::run_lemma_suite(g, lc);
            timings.insert("lemmas".to_string(), elapsed_ms(start));
            results
        }
        None => BTreeMap::new(),
    };

    Ok(TheoremReport {
        group_name: name.to_string(),
        group_order: g.order() as u64,
        n_of_g,
        factorizations,
        decompositions,
        verdict,
        lemma_results,
        timings,
    })
}

fn describe(g: &Group, h: &Subgroup, class_sizes: IntSet) -> FactorDescriptor {
    FactorDescriptor {
        order: h.order() as u64,
        class_sizes,
        generators: h
            .generators()
            .iter()
            .map(|&x| g.perm(x).to_string())
            .collect(),
    }
}

fn rebuild(g: &Group, f: &FactorDescriptor) -> Result<Subgroup, GroupError> {
    let gens = f
        .generators
        .iter()
        .map(|s| {
            let p = Permutation::parse_cycles(s, g.degree())?;
            g.locate(&p).ok_or(GroupError::ElementNotInGroup)
        })
        .collect::<Result<Vec<_>, _>>()?;
    g.subgroup_generated(gens)
}

/// Re-derives a reported decomposition from the group alone: both factors
/// normal, trivially intersecting, orders multiplying to `|G|`, and class-size
/// sets `Ω` and `{1, n}`.
pub fn recheck_decomposition(g: &Group, d: &Decomposition) -> Result<bool, TheoremError> {
    let a = rebuild(g, &d.a)?;
    let b = rebuild(g, &d.b)?;
    Ok(g.is_internal_direct_product(&a, &b)?
        && a.order() as u64 == d.a.order
        && b.order() as u64 == d.b.order
        && class_size_set(&g.subgroup_as_group(&a)?).sizes == d.omega
        && class_size_set(&g.subgroup_as_group(&b)?).sizes == IntSet::from_values([1, d.n])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_ELEMENT_CAP;

    fn group(d: usize, gens: &[&str]) -> Group {
        let gens: Vec<_> = gens
            .iter()
            .map(|s| Permutation::parse_cycles(s, d).unwrap())
            .collect();
        Group::from_generators(d, &gens, DEFAULT_ELEMENT_CAP).unwrap()
    }

    fn f20() -> Group {
        group(5, &["(0 1 2 3 4)", "(1 2 4 3)"])
    }

    // Extraspecial of order 27 on the points (i, j) -> 3i + j.
    fn h27() -> Group {
        group(9, &["(0 3 6)(1 4 7)(2 5 8)", "(3 4 5)(6 8 7)"])
    }

    #[test]
    fn rediscovers_a_built_product() {
        let g = Group::direct_product(&f20(), &h27(), DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(g.order(), 540);
        let report = verify_main_theorem(&g, "f20 x h27", &VerifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::VerifiedDecomposition);
        assert_eq!(report.n_of_g.sizes.to_vec(), vec![1, 3, 4, 5, 12, 15]);
        let d = &report.decompositions[0];
        assert_eq!((d.a.order, d.b.order, d.n), (20, 27, 3));
        assert!(d.n_is_prime_power);
        assert!(recheck_decomposition(&g, d).unwrap());
    }

    #[test]
    fn hypothesis_not_met() {
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        let report = verify_main_theorem(&s4, "s4", &VerifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
        assert!(report.factorizations.is_empty());
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        let report = verify_main_theorem(&c6, "c6", &VerifyConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn budget_overrun_withholds_verdict() {
        let g = Group::direct_product(&f20(), &h27(), DEFAULT_ELEMENT_CAP).unwrap();
        let config = VerifyConfig {
            normal_budget: 2,
            ..VerifyConfig::default()
        };
        assert!(matches!(
            verify_main_theorem(&g, "g", &config),
            Err(TheoremError::Group(GroupError::BudgetExceeded { .. }))
        ));
    }

    #[test]
    fn recheck_rejects_a_wrong_split() {
        let g = Group::direct_product(&f20(), &h27(), DEFAULT_ELEMENT_CAP).unwrap();
        let report = verify_main_theorem(&g, "g", &VerifyConfig::default()).unwrap();
        let mut d = report.decompositions[0].clone();
        d.n = 5;
        assert!(!recheck_decomposition(&g, &d).unwrap());
    }

    #[test]
    fn lemma_suite_attached_on_request() {
        let g = h27();
        let config = VerifyConfig {
            lemmas: Some(LemmaConfig::default()),
            ..VerifyConfig::default()
        };
        let report = verify_main_theorem(&g, "h27", &config).unwrap();
        assert_eq!(report.lemma_results["normal_p_complement"].checked, 1);
        assert!(report
            .lemma_results
            .values()
            .all(|o| o.status != crate::theorem::LemmaStatus::Fail));
    }
}
