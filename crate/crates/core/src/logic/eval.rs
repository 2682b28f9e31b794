//! Exact truth evaluation of sentences over a finite carrier by recursive
//! quantifier expansion.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::formula::{Formula, Term};
use crate::oracle::FiniteCarrier;

type Env = HashMap<String, Vec<u64>>;

fn eval_term(t: &Term, carrier: &FiniteCarrier, env: &Env) -> Result<Vec<u64>> {
    match t {
        Term::Identity => Ok(carrier.identity()),
        Term::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("free variable `{name}`"))),
        Term::Prod(factors) => {
            let mut acc = carrier.identity();
            for f in factors {
                acc = carrier.mul(&acc, &eval_term(f, carrier, env)?);
            }
            Ok(acc)
        }
        Term::Inv(inner) => Ok(carrier.inv(&eval_term(inner, carrier, env)?)),
        Term::Pow(base, e) => Ok(carrier.pow(&eval_term(base, carrier, env)?, *e)),
    }
}

fn eval(f: &Formula, carrier: &FiniteCarrier, env: &mut Env) -> Result<bool> {
    match f {
        Formula::Eq(a, b) => Ok(eval_term(a, carrier, env)? == eval_term(b, carrier, env)?),
        Formula::Not(inner) => Ok(!eval(inner, carrier, env)?),
        Formula::And(fs) => {
            for inner in fs {
                if !eval(inner, carrier, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for inner in fs {
                if eval(inner, carrier, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists(vars, body) => quantify(vars, body, carrier, env, true),
        Formula::Forall(vars, body) => quantify(vars, body, carrier, env, false),
    }
}

fn quantify(
    vars: &[String],
    body: &Formula,
    carrier: &FiniteCarrier,
    env: &mut Env,
    existential: bool,
) -> Result<bool> {
    let Some(var) = vars.first() else {
        return eval(body, carrier, env);
    };
    let shadowed = env.get(var).cloned();
    let mut result = !existential;
    for e in carrier.elements() {
        env.insert(var.clone(), e);
        if quantify(&vars[1..], body, carrier, env, existential)? == existential {
            result = existential;
            break;
        }
    }
    match shadowed {
        Some(old) => env.insert(var.clone(), old),
        None => env.remove(var),
    };
    Ok(result)
}

/// Truth value of a sentence in a finite carrier. Free variables are an
/// error.
pub fn eval_formula_finite(f: &Formula, carrier: &FiniteCarrier) -> Result<bool> {
    eval(f, carrier, &mut Env::new())
}
