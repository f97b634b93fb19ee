//! Derived rules, validated by expansion into primitive lines.
//!
//! Every macro here genuinely expands: the checker re-checks the emitted
//! lines, so a macro cannot smuggle in an unsound step. Expansions can
//! reference the lines preceding the macro line by their ordinary
//! numbers; emitted lines continue the numbering.
//!
//! The deduction theorem (`DT`) is the heavy one. To discharge a
//! hypothesis `d` it rebuilds the whole supporting derivation in lifted
//! form, turning every line `f` into `d -> f`:
//!
//! - assumptions of `d` become the native identity `rule:t1`;
//! - other assumptions and axioms are weakened with `A12`;
//! - `MP` is replayed through `A3` and `A11`, `Adj` through `A3`;
//! - the disjunctive rules (`dMP`, `dTrans`, `dECQ`) are replayed inside
//!   a wrapper disjunct: `A13` provides `d | (d -> goal)`, the lifted
//!   premises are injected with `A5`, `dMP` against the commuted wrapper
//!   strips the leading `d ->`, the disjunction is reassociated so the
//!   rule can fire one level down, and `A6` extracts the goal;
//! - theorem-only rules are re-emitted against the untouched (empty
//!   context) part of the derivation and then weakened.
//!
//! `CN` is the one rule a discharge cannot cross: its conclusion context
//! is computed from the premise context, so adding a hypothesis changes
//! the conclusion, and the expansion reports an error instead.

use std::collections::{BTreeSet, HashMap};

use crate::formula::{render, Formula};

use super::{Justification, Line, Subst};

/// Names of the macros [`expand_macro`] understands.
pub fn macro_names() -> &'static [&'static str] {
    &[
        "Trans",
        "ECQ",
        "ECQimp",
        "DT",
        "R1",
        "andIntro",
        "comm",
        "orElimSame",
        "pairing",
        "dAimpFwd",
        "dAimpBwd",
        "dAimpMP",
        "IandGen",
        "dAand",
        "AnnAndGen",
    ]
}

const MAX_DEPTH: usize = 32;
const MAX_LINES: usize = 1_000_000;

fn fand(a: &Formula, b: &Formula) -> Formula {
    a.clone().and(b.clone())
}

fn fimp(a: &Formula, b: &Formula) -> Formula {
    a.clone().imp(b.clone())
}

fn forr(a: &Formula, b: &Formula) -> Formula {
    a.clone().or(b.clone())
}

fn fnot(a: &Formula) -> Formula {
    a.clone().not()
}

fn fign(a: &Formula) -> Formula {
    a.clone().ign()
}

fn fann(content: &Formula, body: &Formula) -> Formula {
    Formula::ann(content.clone(), body.clone())
}

type Ctx = BTreeSet<Formula>;

/// Emits lines whose numbering continues an existing prefix.
struct Expander<'a> {
    prefix: &'a [Line],
    lines: Vec<Line>,
}

impl<'a> Expander<'a> {
    fn new(prefix: &'a [Line]) -> Self {
        Expander {
            prefix,
            lines: Vec::new(),
        }
    }

    fn push(&mut self, ctx: &Ctx, formula: Formula, justification: Justification) -> usize {
        self.lines.push(Line {
            context: ctx.clone(),
            formula,
            justification,
        });
        self.prefix.len() + self.lines.len()
    }

    fn axiom(&mut self, ctx: &Ctx, scheme: &str, formula: Formula) -> usize {
        self.push(
            ctx,
            formula,
            Justification::Axiom {
                scheme: scheme.into(),
                subst: None,
            },
        )
    }

    fn rule(&mut self, ctx: &Ctx, name: &str, premises: Vec<usize>, formula: Formula) -> usize {
        self.push(
            ctx,
            formula,
            Justification::Rule {
                name: name.into(),
                premises,
            },
        )
    }

    /// `i: a -> b`, `j: b -> c`, yields `a -> c` via `A5` + `dTrans`.
    fn trans(
        &mut self,
        ctx: &Ctx,
        i: usize,
        j: usize,
        a: &Formula,
        b: &Formula,
        c: &Formula,
    ) -> usize {
        let goal = fimp(a, c);
        let fi = fimp(a, b);
        let fj = fimp(b, c);
        let l1 = self.axiom(ctx, "A5", fimp(&fi, &forr(&goal, &fi)));
        let l2 = self.rule(ctx, "MP", vec![l1, i], forr(&goal, &fi));
        let l3 = self.axiom(ctx, "A5", fimp(&fj, &forr(&goal, &fj)));
        let l4 = self.rule(ctx, "MP", vec![l3, j], forr(&goal, &fj));
        let l5 = self.rule(ctx, "dTrans", vec![l2, l4], forr(&goal, &goal));
        self.or_elim_same(ctx, l5, &goal)
    }

    /// `i: x | x`, yields `x`.
    fn or_elim_same(&mut self, ctx: &Ctx, i: usize, x: &Formula) -> usize {
        let idem = fimp(x, x);
        let l1 = self.rule(ctx, "t1", vec![], idem.clone());
        let l2 = self.rule(ctx, "Adj", vec![l1, l1], fand(&idem, &idem));
        let l3 = self.axiom(ctx, "A6", fimp(&fand(&idem, &idem), &fimp(&forr(x, x), x)));
        let l4 = self.rule(ctx, "MP", vec![l3, l2], fimp(&forr(x, x), x));
        self.rule(ctx, "MP", vec![l4, i], x.clone())
    }

    /// `i: a | b`, yields `b | a`.
    fn comm(&mut self, ctx: &Ctx, i: usize, a: &Formula, b: &Formula) -> usize {
        let goal = forr(b, a);
        let l1 = self.axiom(ctx, "A5", fimp(a, &goal));
        let l2 = self.axiom(ctx, "A4", fimp(b, &goal));
        let l3 = self.rule(
            ctx,
            "Adj",
            vec![l1, l2],
            fand(&fimp(a, &goal), &fimp(b, &goal)),
        );
        let l4 = self.axiom(
            ctx,
            "A6",
            fimp(
                &fand(&fimp(a, &goal), &fimp(b, &goal)),
                &fimp(&forr(a, b), &goal),
            ),
        );
        let l5 = self.rule(ctx, "MP", vec![l4, l3], fimp(&forr(a, b), &goal));
        self.rule(ctx, "MP", vec![l5, i], goal)
    }

    /// `i: a -> b`, `j: a -> c`, yields `a -> (b & c)`.
    fn and_intro(
        &mut self,
        ctx: &Ctx,
        i: usize,
        j: usize,
        a: &Formula,
        b: &Formula,
        c: &Formula,
    ) -> usize {
        let l1 = self.rule(ctx, "Adj", vec![i, j], fand(&fimp(a, b), &fimp(a, c)));
        let l2 = self.axiom(
            ctx,
            "A3",
            fimp(&fand(&fimp(a, b), &fimp(a, c)), &fimp(a, &fand(b, c))),
        );
        self.rule(ctx, "MP", vec![l2, l1], fimp(a, &fand(b, c)))
    }

    /// Yields the adjunction theorem `x -> (y -> (x & y))`.
    fn pairing(&mut self, ctx: &Ctx, x: &Formula, y: &Formula) -> usize {
        let yy = fimp(y, y);
        let yx = fimp(y, x);
        let l1 = self.rule(ctx, "t1", vec![], yy.clone());
        let l2 = self.axiom(ctx, "A12", fimp(&yy, &fimp(x, &yy)));
        let l3 = self.rule(ctx, "MP", vec![l2, l1], fimp(x, &yy));
        let l4 = self.axiom(ctx, "A12", fimp(x, &yx));
        let l5 = self.rule(ctx, "Adj", vec![l4, l3], fand(&fimp(x, &yx), &fimp(x, &yy)));
        let l6 = self.axiom(
            ctx,
            "A3",
            fimp(
                &fand(&fimp(x, &yx), &fimp(x, &yy)),
                &fimp(x, &fand(&yx, &yy)),
            ),
        );
        let l7 = self.rule(ctx, "MP", vec![l6, l5], fimp(x, &fand(&yx, &yy)));
        let l8 = self.axiom(ctx, "A3", fimp(&fand(&yx, &yy), &fimp(y, &fand(x, y))));
        self.trans(ctx, l7, l8, x, &fand(&yx, &yy), &fimp(y, &fand(x, y)))
    }

    /// `i: x & ~x`, yields any `target`.
    fn ecq(&mut self, ctx: &Ctx, i: usize, x: &Formula, target: &Formula) -> usize {
        let contra = fand(x, &fnot(x));
        let l1 = self.axiom(ctx, "A5", fimp(&contra, &forr(target, &contra)));
        let l2 = self.rule(ctx, "MP", vec![l1, i], forr(target, &contra));
        let l3 = self.rule(ctx, "dECQ", vec![l2], forr(target, target));
        self.or_elim_same(ctx, l3, target)
    }

    /// Yields the guarded ex falso theorem `(x & ~x) -> y`.
    fn ecq_imp(&mut self, ctx: &Ctx, x: &Formula, y: &Formula) -> usize {
        let contra = fand(x, &fnot(x));
        let goal = fimp(&contra, y);
        let l1 = self.axiom(ctx, "A13", forr(&contra, &goal));
        let l2 = self.comm(ctx, l1, &contra, &goal);
        let l3 = self.rule(ctx, "dECQ", vec![l2], forr(&goal, &goal));
        self.or_elim_same(ctx, l3, &goal)
    }

    /// `i: a | (b | c)`, yields `(a | b) | c`.
    fn assoc_left(&mut self, ctx: &Ctx, i: usize, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let ab = forr(a, b);
        let z = forr(&ab, c);
        let l1 = self.axiom(ctx, "A4", fimp(a, &ab));
        let l2 = self.axiom(ctx, "A4", fimp(&ab, &z));
        let l3 = self.trans(ctx, l1, l2, a, &ab, &z);
        let l4 = self.axiom(ctx, "A5", fimp(b, &ab));
        let l5 = self.trans(ctx, l4, l2, b, &ab, &z);
        let l6 = self.axiom(ctx, "A5", fimp(c, &z));
        let l7 = self.rule(ctx, "Adj", vec![l5, l6], fand(&fimp(b, &z), &fimp(c, &z)));
        let l8 = self.axiom(
            ctx,
            "A6",
            fimp(&fand(&fimp(b, &z), &fimp(c, &z)), &fimp(&forr(b, c), &z)),
        );
        let l9 = self.rule(ctx, "MP", vec![l8, l7], fimp(&forr(b, c), &z));
        let l10 = self.rule(
            ctx,
            "Adj",
            vec![l3, l9],
            fand(&fimp(a, &z), &fimp(&forr(b, c), &z)),
        );
        let l11 = self.axiom(
            ctx,
            "A6",
            fimp(
                &fand(&fimp(a, &z), &fimp(&forr(b, c), &z)),
                &fimp(&forr(a, &forr(b, c)), &z),
            ),
        );
        let l12 = self.rule(ctx, "MP", vec![l11, l10], fimp(&forr(a, &forr(b, c)), &z));
        self.rule(ctx, "MP", vec![l12, i], z)
    }

    /// `i: (a | b) | c`, yields `a | (b | c)`.
    fn assoc_right(&mut self, ctx: &Ctx, i: usize, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let bc = forr(b, c);
        let z = forr(a, &bc);
        let l1 = self.axiom(ctx, "A4", fimp(b, &bc));
        let l2 = self.axiom(ctx, "A5", fimp(&bc, &z));
        let l3 = self.trans(ctx, l1, l2, b, &bc, &z);
        let l4 = self.axiom(ctx, "A4", fimp(a, &z));
        let l5 = self.rule(ctx, "Adj", vec![l4, l3], fand(&fimp(a, &z), &fimp(b, &z)));
        let l6 = self.axiom(
            ctx,
            "A6",
            fimp(&fand(&fimp(a, &z), &fimp(b, &z)), &fimp(&forr(a, b), &z)),
        );
        let l7 = self.rule(ctx, "MP", vec![l6, l5], fimp(&forr(a, b), &z));
        let l8 = self.axiom(ctx, "A5", fimp(c, &bc));
        let l9 = self.trans(ctx, l8, l2, c, &bc, &z);
        let l10 = self.rule(
            ctx,
            "Adj",
            vec![l7, l9],
            fand(&fimp(&forr(a, b), &z), &fimp(c, &z)),
        );
        let l11 = self.axiom(
            ctx,
            "A6",
            fimp(
                &fand(&fimp(&forr(a, b), &z), &fimp(c, &z)),
                &fimp(&forr(&forr(a, b), c), &z),
            ),
        );
        let l12 = self.rule(ctx, "MP", vec![l11, l10], fimp(&forr(&forr(a, b), c), &z));
        self.rule(ctx, "MP", vec![l12, i], z)
    }

    /// `i: f`, yields `d -> f` via `A12`.
    fn weaken_imp(&mut self, ctx: &Ctx, i: usize, d: &Formula, f: &Formula) -> usize {
        let l1 = self.axiom(ctx, "A12", fimp(f, &fimp(d, f)));
        self.rule(ctx, "MP", vec![l1, i], fimp(d, f))
    }

    /// `i: d -> (a -> b)`, `j: d -> a`, yields `d -> b`.
    fn mp_comb(
        &mut self,
        ctx: &Ctx,
        i: usize,
        j: usize,
        d: &Formula,
        a: &Formula,
        b: &Formula,
    ) -> usize {
        let ab = fimp(a, b);
        let pair = fand(&fimp(d, &ab), &fimp(d, a));
        let l1 = self.rule(ctx, "Adj", vec![i, j], pair.clone());
        let l2 = self.axiom(ctx, "A3", fimp(&pair, &fimp(d, &fand(&ab, a))));
        let l3 = self.rule(ctx, "MP", vec![l2, l1], fimp(d, &fand(&ab, a)));
        let l4 = self.axiom(ctx, "A11", fimp(&fand(&ab, a), b));
        self.trans(ctx, l3, l4, d, &fand(&ab, a), b)
    }

    /// `i: f`, yields `t | f` via `A5`.
    fn wrap_or(&mut self, ctx: &Ctx, t: &Formula, i: usize, f: &Formula) -> usize {
        let l1 = self.axiom(ctx, "A5", fimp(f, &forr(t, f)));
        self.rule(ctx, "MP", vec![l1, i], forr(t, f))
    }

    /// `i: t | body` where `t` is `d -> body`, yields `t`.
    fn extract_imp(&mut self, ctx: &Ctx, i: usize, d: &Formula, body: &Formula) -> usize {
        let t = fimp(d, body);
        let l1 = self.rule(ctx, "t1", vec![], fimp(&t, &t));
        let l2 = self.axiom(ctx, "A12", fimp(body, &t));
        let l3 = self.rule(
            ctx,
            "Adj",
            vec![l1, l2],
            fand(&fimp(&t, &t), &fimp(body, &t)),
        );
        let l4 = self.axiom(
            ctx,
            "A6",
            fimp(
                &fand(&fimp(&t, &t), &fimp(body, &t)),
                &fimp(&forr(&t, body), &t),
            ),
        );
        let l5 = self.rule(ctx, "MP", vec![l4, l3], fimp(&forr(&t, body), &t));
        self.rule(ctx, "MP", vec![l5, i], t)
    }

    /// Builds the commuted wrapper `t | d` from `A13`.
    fn wrapper(&mut self, ctx: &Ctx, d: &Formula, t: &Formula) -> usize {
        let l1 = self.axiom(ctx, "A13", forr(d, t));
        self.comm(ctx, l1, d, t)
    }

    /// Lifts `dMP` under a discharged `d`: from `lu: d -> (x | (a -> b))`
    /// and `lv: d -> (x | a)` emits `d -> (x | b)`.
    #[allow(clippy::too_many_arguments)]
    fn dmp_lift(
        &mut self,
        ctx: &Ctx,
        lu: usize,
        lv: usize,
        d: &Formula,
        x: &Formula,
        a: &Formula,
        b: &Formula,
    ) -> usize {
        let body = forr(x, b);
        let t = fimp(d, &body);
        let fu = fimp(d, &forr(x, &fimp(a, b)));
        let fv = fimp(d, &forr(x, a));
        let w = self.wrapper(ctx, d, &t);
        let u1 = self.wrap_or(ctx, &t, lu, &fu);
        let u2 = self.rule(ctx, "dMP", vec![u1, w], forr(&t, &forr(x, &fimp(a, b))));
        let u3 = self.assoc_left(ctx, u2, &t, x, &fimp(a, b));
        let v1 = self.wrap_or(ctx, &t, lv, &fv);
        let v2 = self.rule(ctx, "dMP", vec![v1, w], forr(&t, &forr(x, a)));
        let v3 = self.assoc_left(ctx, v2, &t, x, a);
        let m = self.rule(ctx, "dMP", vec![u3, v3], forr(&forr(&t, x), b));
        let back = self.assoc_right(ctx, m, &t, x, b);
        self.extract_imp(ctx, back, d, &body)
    }

    /// Lifts `dTrans` under a discharged `d`.
    #[allow(clippy::too_many_arguments)]
    fn dtrans_lift(
        &mut self,
        ctx: &Ctx,
        lu: usize,
        lv: usize,
        d: &Formula,
        r: &Formula,
        a: &Formula,
        b: &Formula,
        c: &Formula,
    ) -> usize {
        let body = forr(r, &fimp(a, c));
        let t = fimp(d, &body);
        let fu = fimp(d, &forr(r, &fimp(a, b)));
        let fv = fimp(d, &forr(r, &fimp(b, c)));
        let w = self.wrapper(ctx, d, &t);
        let u1 = self.wrap_or(ctx, &t, lu, &fu);
        let u2 = self.rule(ctx, "dMP", vec![u1, w], forr(&t, &forr(r, &fimp(a, b))));
        let u3 = self.assoc_left(ctx, u2, &t, r, &fimp(a, b));
        let v1 = self.wrap_or(ctx, &t, lv, &fv);
        let v2 = self.rule(ctx, "dMP", vec![v1, w], forr(&t, &forr(r, &fimp(b, c))));
        let v3 = self.assoc_left(ctx, v2, &t, r, &fimp(b, c));
        let m = self.rule(ctx, "dTrans", vec![u3, v3], forr(&forr(&t, r), &fimp(a, c)));
        let back = self.assoc_right(ctx, m, &t, r, &fimp(a, c));
        self.extract_imp(ctx, back, d, &body)
    }

    /// Lifts `dECQ` under a discharged `d`: from `lu: d -> (x | (w & ~w))`
    /// emits `d -> (x | psi)`.
    fn decq_lift(
        &mut self,
        ctx: &Ctx,
        lu: usize,
        d: &Formula,
        x: &Formula,
        w: &Formula,
        psi: &Formula,
    ) -> usize {
        let contra = fand(w, &fnot(w));
        let body = forr(x, psi);
        let t = fimp(d, &body);
        let fu = fimp(d, &forr(x, &contra));
        let wr = self.wrapper(ctx, d, &t);
        let u1 = self.wrap_or(ctx, &t, lu, &fu);
        let u2 = self.rule(ctx, "dMP", vec![u1, wr], forr(&t, &forr(x, &contra)));
        let u3 = self.assoc_left(ctx, u2, &t, x, &contra);
        let m = self.rule(ctx, "dECQ", vec![u3], forr(&forr(&t, x), psi));
        let back = self.assoc_right(ctx, m, &t, x, psi);
        self.extract_imp(ctx, back, d, &body)
    }

    /// Yields the announcement K-style theorem
    /// `[phi](a -> b) -> ([phi]a -> [phi]b)` from the `dAimp` axiom.
    fn daimp_fwd(&mut self, ctx: &Ctx, phi: &Formula, a: &Formula, b: &Formula) -> usize {
        let fwd = fimp(&fann(phi, &fimp(a, b)), &fimp(&fann(phi, a), &fann(phi, b)));
        let bwd = fimp(&fimp(&fann(phi, a), &fann(phi, b)), &fann(phi, &fimp(a, b)));
        let l1 = self.axiom(ctx, "dAimp", fand(&fwd, &bwd));
        let l2 = self.axiom(ctx, "A1", fimp(&fand(&fwd, &bwd), &fwd));
        self.rule(ctx, "MP", vec![l2, l1], fwd)
    }

    /// The converse direction of [`Expander::daimp_fwd`].
    fn daimp_bwd(&mut self, ctx: &Ctx, phi: &Formula, a: &Formula, b: &Formula) -> usize {
        let fwd = fimp(&fann(phi, &fimp(a, b)), &fimp(&fann(phi, a), &fann(phi, b)));
        let bwd = fimp(&fimp(&fann(phi, a), &fann(phi, b)), &fann(phi, &fimp(a, b)));
        let l1 = self.axiom(ctx, "dAimp", fand(&fwd, &bwd));
        let l2 = self.axiom(ctx, "A2", fimp(&fand(&fwd, &bwd), &bwd));
        self.rule(ctx, "MP", vec![l2, l1], bwd)
    }

    /// `i: a -> (b -> c)`, yields `(a & b) -> c`.
    fn r1_emit(&mut self, ctx: &Ctx, i: usize, a: &Formula, b: &Formula, c: &Formula) -> usize {
        let ab = fand(a, b);
        let bc = fimp(b, c);
        let l1 = self.axiom(ctx, "A1", fimp(&ab, a));
        let l2 = self.trans(ctx, l1, i, &ab, a, &bc);
        let l3 = self.axiom(ctx, "A2", fimp(&ab, b));
        let l4 = self.and_intro(ctx, l2, l3, &ab, &bc, b);
        let l5 = self.axiom(ctx, "A11", fimp(&fand(&bc, b), c));
        self.trans(ctx, l4, l5, &ab, &fand(&bc, b), c)
    }

    /// `i: x -> y`, yields `(x & z) -> (y & z)`.
    fn mono_and(&mut self, ctx: &Ctx, i: usize, x: &Formula, y: &Formula, z: &Formula) -> usize {
        let xz = fand(x, z);
        let l1 = self.axiom(ctx, "A1", fimp(&xz, x));
        let l2 = self.trans(ctx, l1, i, &xz, x, y);
        let l3 = self.axiom(ctx, "A2", fimp(&xz, z));
        self.and_intro(ctx, l2, l3, &xz, y, z)
    }

    /// Emits the 16-step biconditional
    /// `[phi](a & b) <-> ([phi]a & [phi]b)` and returns its index.
    fn daand_iff(&mut self, ctx: &Ctx, phi: &Formula, a: &Formula, b: &Formula) -> usize {
        let ab = fand(a, b);
        let ann_ab = fann(phi, &ab);
        let ann_a = fann(phi, a);
        let ann_b = fann(phi, b);
        let l1 = self.axiom(ctx, "A1", fimp(&ab, a));
        let l2 = self.axiom(ctx, "A2", fimp(&ab, b));
        let l3 = self.rule(ctx, "nec", vec![l1], fann(phi, &fimp(&ab, a)));
        let l4 = self.daimp_fwd(ctx, phi, &ab, a);
        let l5 = self.rule(ctx, "MP", vec![l4, l3], fimp(&ann_ab, &ann_a));
        let l6 = self.rule(ctx, "nec", vec![l2], fann(phi, &fimp(&ab, b)));
        let l7 = self.daimp_fwd(ctx, phi, &ab, b);
        let l8 = self.rule(ctx, "MP", vec![l7, l6], fimp(&ann_ab, &ann_b));
        let l9 = self.and_intro(ctx, l5, l8, &ann_ab, &ann_a, &ann_b);
        let l10 = self.pairing(ctx, a, b);
        let l11 = self.rule(ctx, "nec", vec![l10], fann(phi, &fimp(a, &fimp(b, &ab))));
        let l12a = self.daimp_fwd(ctx, phi, a, &fimp(b, &ab));
        let l12 = self.rule(
            ctx,
            "MP",
            vec![l12a, l11],
            fimp(&ann_a, &fann(phi, &fimp(b, &ab))),
        );
        let l13 = self.daimp_fwd(ctx, phi, b, &ab);
        let l14 = self.trans(
            ctx,
            l12,
            l13,
            &ann_a,
            &fann(phi, &fimp(b, &ab)),
            &fimp(&ann_b, &ann_ab),
        );
        let l15 = self.r1_emit(ctx, l14, &ann_a, &ann_b, &ann_ab);
        let fwd = fimp(&ann_ab, &fand(&ann_a, &ann_b));
        let bwd = fimp(&fand(&ann_a, &ann_b), &ann_ab);
        self.rule(ctx, "Adj", vec![l9, l15], fand(&fwd, &bwd))
    }
}

fn resolve<'a>(prefix: &'a [Line], premises: &[usize]) -> Result<Vec<&'a Line>, String> {
    premises
        .iter()
        .map(|&i| {
            if i == 0 || i > prefix.len() {
                Err(format!("premise {i} is not an earlier line"))
            } else {
                Ok(&prefix[i - 1])
            }
        })
        .collect()
}

fn ctx_union(lines: &[&Line]) -> Ctx {
    let mut out = Ctx::new();
    for line in lines {
        out.extend(line.context.iter().cloned());
    }
    out
}

pub(crate) fn as_imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

pub(crate) fn as_contradiction(f: &Formula) -> Option<&Formula> {
    if let Formula::And(x, nx) = f {
        if let Formula::Not(inner) = nx.as_ref() {
            if inner.as_ref() == x.as_ref() {
                return Some(x);
            }
        }
    }
    None
}

/// Maximal left-nested conjunction spine: `((a & b) & c)` gives
/// `[a, b, c]`.
fn and_spine(f: &Formula) -> Vec<&Formula> {
    let mut out = Vec::new();
    let mut cur = f;
    while let Formula::And(l, r) = cur {
        out.push(r.as_ref());
        cur = l.as_ref();
    }
    out.push(cur);
    out.reverse();
    out
}

fn lassoc_and(items: &[&Formula]) -> Formula {
    let mut it = items.iter();
    let first = (*it.next().expect("nonempty spine")).clone();
    it.fold(first, |acc, f| acc.and((*f).clone()))
}

fn lassoc_or(items: &[&Formula]) -> Formula {
    let mut it = items.iter();
    let first = (*it.next().expect("nonempty spine")).clone();
    it.fold(first, |acc, f| acc.or((*f).clone()))
}

/// Expands a macro into primitive lines.
///
/// `prefix` holds the lines before the macro line, `premises` the
/// 1-based indices the macro cites, and `stated` the macro line itself.
/// Emitted lines continue the numbering after `prefix` and may reference
/// both prefix lines and each other. The caller is expected to re-check
/// the expansion and to compare its last line against `stated`.
pub fn expand_macro(
    name: &str,
    prefix: &[Line],
    premises: &[usize],
    stated: &Line,
) -> Result<Vec<Line>, String> {
    expand_inner(name, prefix, premises, stated, 0)
}

fn arity(name: &str, premises: &[&Line], want: usize) -> Result<(), String> {
    if premises.len() == want {
        Ok(())
    } else {
        Err(format!(
            "{name} takes {want} premise(s), got {}",
            premises.len()
        ))
    }
}

fn expand_inner(
    name: &str,
    prefix: &[Line],
    premises: &[usize],
    stated: &Line,
    depth: usize,
) -> Result<Vec<Line>, String> {
    if depth > MAX_DEPTH {
        return Err("macro expansion exceeds the nesting limit".into());
    }
    let plines = resolve(prefix, premises)?;
    let mut e = Expander::new(prefix);
    let empty = Ctx::new();
    match name {
        "Trans" => {
            arity(name, &plines, 2)?;
            let (a, b) = as_imp(&plines[0].formula)
                .ok_or("Trans premises must be implications `a -> b` and `b -> c`")?;
            let (b2, c) = as_imp(&plines[1].formula)
                .ok_or("Trans premises must be implications `a -> b` and `b -> c`")?;
            if b2 != b {
                return Err("Trans premises do not chain: the middle formulas differ".into());
            }
            let ctx = ctx_union(&plines);
            e.trans(&ctx, premises[0], premises[1], a, b, c);
        }
        "ECQ" => {
            arity(name, &plines, 1)?;
            let x = as_contradiction(&plines[0].formula)
                .ok_or("ECQ premise must be a contradiction `f & ~f`")?;
            let ctx = ctx_union(&plines);
            let (x, target) = (x.clone(), stated.formula.clone());
            e.ecq(&ctx, premises[0], &x, &target);
        }
        "ECQimp" => {
            arity(name, &plines, 0)?;
            let (l, y) = as_imp(&stated.formula).ok_or("ECQimp concludes `(f & ~f) -> g`")?;
            let x = as_contradiction(l).ok_or("ECQimp concludes `(f & ~f) -> g`")?;
            let (x, y) = (x.clone(), y.clone());
            e.ecq_imp(&empty, &x, &y);
        }
        "DT" => {
            arity(name, &plines, 1)?;
            return expand_dt(prefix, premises[0], stated, depth);
        }
        "R1" => {
            arity(name, &plines, 1)?;
            let (a, bc) = as_imp(&plines[0].formula)
                .ok_or("R1 premise must have the shape `a -> (b -> c)`")?;
            let (b, c) = as_imp(bc).ok_or("R1 premise must have the shape `a -> (b -> c)`")?;
            let ctx = plines[0].context.clone();
            let (a, b, c) = (a.clone(), b.clone(), c.clone());
            e.r1_emit(&ctx, premises[0], &a, &b, &c);
        }
        "andIntro" => {
            arity(name, &plines, 2)?;
            let (a, b) = as_imp(&plines[0].formula)
                .ok_or("andIntro premises must share an antecedent: `a -> b`, `a -> c`")?;
            let (a2, c) = as_imp(&plines[1].formula)
                .ok_or("andIntro premises must share an antecedent: `a -> b`, `a -> c`")?;
            if a2 != a {
                return Err("andIntro premises have different antecedents".into());
            }
            let ctx = ctx_union(&plines);
            let (a, b, c) = (a.clone(), b.clone(), c.clone());
            e.and_intro(&ctx, premises[0], premises[1], &a, &b, &c);
        }
        "comm" => {
            arity(name, &plines, 1)?;
            let (a, b) = plines[0]
                .formula
                .as_or()
                .ok_or("comm premise must be a disjunction")?;
            let ctx = ctx_union(&plines);
            let (a, b) = (a.clone(), b.clone());
            e.comm(&ctx, premises[0], &a, &b);
        }
        "orElimSame" => {
            arity(name, &plines, 1)?;
            let (x, x2) = plines[0]
                .formula
                .as_or()
                .ok_or("orElimSame premise must be a disjunction `x | x`")?;
            if x != x2 {
                return Err("orElimSame premise must repeat the same disjunct".into());
            }
            let ctx = ctx_union(&plines);
            let x = x.clone();
            e.or_elim_same(&ctx, premises[0], &x);
        }
        "pairing" => {
            arity(name, &plines, 0)?;
            let (x, rest) =
                as_imp(&stated.formula).ok_or("pairing concludes `x -> (y -> (x & y))`")?;
            let (y, xy) = as_imp(rest).ok_or("pairing concludes `x -> (y -> (x & y))`")?;
            if *xy != fand(x, y) {
                return Err("pairing concludes `x -> (y -> (x & y))`".into());
            }
            let (x, y) = (x.clone(), y.clone());
            e.pairing(&empty, &x, &y);
        }
        "dAimpFwd" => {
            arity(name, &plines, 0)?;
            let (l, r) = as_imp(&stated.formula)
                .ok_or("dAimpFwd concludes `[f](a -> b) -> ([f]a -> [f]b)`")?;
            let Formula::Ann(phi, im) = l else {
                return Err("dAimpFwd concludes `[f](a -> b) -> ([f]a -> [f]b)`".into());
            };
            let (a, b) = as_imp(im).ok_or("dAimpFwd concludes `[f](a -> b) -> ([f]a -> [f]b)`")?;
            if *r != fimp(&fann(phi, a), &fann(phi, b)) {
                return Err("dAimpFwd concludes `[f](a -> b) -> ([f]a -> [f]b)`".into());
            }
            let (phi, a, b) = ((**phi).clone(), a.clone(), b.clone());
            e.daimp_fwd(&empty, &phi, &a, &b);
        }
        "dAimpBwd" => {
            arity(name, &plines, 0)?;
            let (l, r) = as_imp(&stated.formula)
                .ok_or("dAimpBwd concludes `([f]a -> [f]b) -> [f](a -> b)`")?;
            let Formula::Ann(phi, im) = r else {
                return Err("dAimpBwd concludes `([f]a -> [f]b) -> [f](a -> b)`".into());
            };
            let (a, b) = as_imp(im).ok_or("dAimpBwd concludes `([f]a -> [f]b) -> [f](a -> b)`")?;
            if *l != fimp(&fann(phi, a), &fann(phi, b)) {
                return Err("dAimpBwd concludes `([f]a -> [f]b) -> [f](a -> b)`".into());
            }
            let (phi, a, b) = ((**phi).clone(), a.clone(), b.clone());
            e.daimp_bwd(&empty, &phi, &a, &b);
        }
        "dAimpMP" => {
            arity(name, &plines, 1)?;
            let Formula::Ann(phi, im) = &plines[0].formula else {
                return Err("dAimpMP premise must be `[f](a -> b)`".into());
            };
            let (a, b) = as_imp(im).ok_or("dAimpMP premise must be `[f](a -> b)`")?;
            let ctx = plines[0].context.clone();
            let (phi, a, b) = ((**phi).clone(), a.clone(), b.clone());
            let fwd = e.daimp_fwd(&ctx, &phi, &a, &b);
            e.rule(
                &ctx,
                "MP",
                vec![fwd, premises[0]],
                fimp(&fann(&phi, &a), &fann(&phi, &b)),
            );
        }
        "IandGen" => {
            arity(name, &plines, 0)?;
            let (lhs, rhs) = as_imp(&stated.formula)
                .ok_or("IandGen concludes `(I a & ... & I z) -> I (a | ... | z)`")?;
            let Formula::Ign(dis) = rhs else {
                return Err("IandGen concludes `(I a & ... & I z) -> I (a | ... | z)`".into());
            };
            let parts = and_spine(lhs);
            let mut psis = Vec::with_capacity(parts.len());
            for part in &parts {
                let Formula::Ign(inner) = part else {
                    return Err("every conjunct on the left of IandGen must be `I f`".into());
                };
                psis.push(inner.as_ref());
            }
            if **dis != lassoc_or(&psis) {
                return Err(
                    "the IandGen disjunction must list the same formulas in the same order".into(),
                );
            }
            if psis.len() == 1 {
                e.rule(&empty, "t1", vec![], stated.formula.clone());
            } else {
                let mut cur_a = fand(&fign(psis[0]), &fign(psis[1]));
                let mut cur_d = forr(psis[0], psis[1]);
                let mut cur = e.axiom(&empty, "IAND", fimp(&cur_a, &fign(&cur_d)));
                for psi in &psis[2..] {
                    let next_a = fand(&cur_a, &fign(psi));
                    let p1 = e.axiom(&empty, "A1", fimp(&next_a, &cur_a));
                    let t = e.trans(&empty, p1, cur, &next_a, &cur_a, &fign(&cur_d));
                    let p2 = e.axiom(&empty, "A2", fimp(&next_a, &fign(psi)));
                    let ai = e.and_intro(&empty, t, p2, &next_a, &fign(&cur_d), &fign(psi));
                    let next_d = forr(&cur_d, psi);
                    let ia = e.axiom(
                        &empty,
                        "IAND",
                        fimp(&fand(&fign(&cur_d), &fign(psi)), &fign(&next_d)),
                    );
                    cur = e.trans(
                        &empty,
                        ai,
                        ia,
                        &next_a,
                        &fand(&fign(&cur_d), &fign(psi)),
                        &fign(&next_d),
                    );
                    cur_a = next_a;
                    cur_d = next_d;
                }
            }
        }
        "dAand" => {
            arity(name, &plines, 0)?;
            let (phi, a, b) = parse_daand(&stated.formula)
                .ok_or("dAand concludes `[f](a & b) <-> ([f]a & [f]b)`")?;
            let (phi, a, b) = (phi.clone(), a.clone(), b.clone());
            e.daand_iff(&empty, &phi, &a, &b);
        }
        "AnnAndGen" => {
            arity(name, &plines, 0)?;
            expand_ann_and_gen(&mut e, &stated.formula)?;
        }
        other => return Err(format!("unknown macro `{other}`")),
    }
    Ok(e.lines)
}

/// Recognises `[phi](a & b) <-> ([phi]a & [phi]b)` on the desugared
/// tree, returning `(phi, a, b)`.
fn parse_daand(f: &Formula) -> Option<(&Formula, &Formula, &Formula)> {
    let Formula::And(fwd, bwd) = f else {
        return None;
    };
    let (l, r) = as_imp(fwd)?;
    let Formula::Ann(phi, ab) = l else {
        return None;
    };
    let Formula::And(a, b) = ab.as_ref() else {
        return None;
    };
    if *r != fand(&fann(phi, a), &fann(phi, b)) {
        return None;
    }
    if **bwd != fimp(r, l) {
        return None;
    }
    Some((phi, a, b))
}

fn expand_ann_and_gen(e: &mut Expander, stated: &Formula) -> Result<(), String> {
    const SHAPE: &str = "AnnAndGen concludes `[f](a & ... & z) <-> ([f]a & ... & [f]z)`";
    let empty = Ctx::new();
    let Formula::And(fwd, bwd) = stated else {
        return Err(SHAPE.into());
    };
    let (l, r) = as_imp(fwd).ok_or(SHAPE)?;
    if **bwd != fimp(r, l) {
        return Err(SHAPE.into());
    }
    let Formula::Ann(phi, content) = l else {
        return Err(SHAPE.into());
    };
    let parts = and_spine(r);
    let mut chis = Vec::with_capacity(parts.len());
    for part in &parts {
        let Formula::Ann(c, body) = part else {
            return Err(SHAPE.into());
        };
        if c != phi {
            return Err("every conjunct on the right must announce the same formula".into());
        }
        chis.push(body.as_ref());
    }
    if **content != lassoc_and(&chis) {
        return Err("the announced conjunction must list the bodies in the same order".into());
    }
    let phi = (**phi).clone();
    match chis.len() {
        1 => {
            let one = fann(&phi, chis[0]);
            let idem = fimp(&one, &one);
            let l1 = e.rule(&empty, "t1", vec![], idem.clone());
            e.rule(&empty, "Adj", vec![l1, l1], fand(&idem, &idem));
        }
        2 => {
            e.daand_iff(&empty, &phi, chis[0], chis[1]);
        }
        _ => {
            let mut c_k = fand(chis[0], chis[1]);
            let mut a_k = fand(&fann(&phi, chis[0]), &fann(&phi, chis[1]));
            let base = e.daand_iff(&empty, &phi, chis[0], chis[1]);
            let fwd0 = fimp(&fann(&phi, &c_k), &a_k);
            let bwd0 = fimp(&a_k, &fann(&phi, &c_k));
            let pf = e.axiom(&empty, "A1", fimp(&fand(&fwd0, &bwd0), &fwd0));
            let mut fwd_k = e.rule(&empty, "MP", vec![pf, base], fwd0.clone());
            let pb = e.axiom(&empty, "A2", fimp(&fand(&fwd0, &bwd0), &bwd0));
            let mut bwd_k = e.rule(&empty, "MP", vec![pb, base], bwd0.clone());
            for chi in &chis[2..] {
                let ann_chi = fann(&phi, chi);
                let c_next = fand(&c_k, chi);
                let a_next = fand(&a_k, &ann_chi);
                let step = e.daand_iff(&empty, &phi, &c_k, chi);
                let sf = fimp(&fann(&phi, &c_next), &fand(&fann(&phi, &c_k), &ann_chi));
                let sb = fimp(&fand(&fann(&phi, &c_k), &ann_chi), &fann(&phi, &c_next));
                let spf = e.axiom(&empty, "A1", fimp(&fand(&sf, &sb), &sf));
                let fwd2 = e.rule(&empty, "MP", vec![spf, step], sf.clone());
                let spb = e.axiom(&empty, "A2", fimp(&fand(&sf, &sb), &sb));
                let bwd2 = e.rule(&empty, "MP", vec![spb, step], sb.clone());
                let mono_f = e.mono_and(&empty, fwd_k, &fann(&phi, &c_k), &a_k, &ann_chi);
                fwd_k = e.trans(
                    &empty,
                    fwd2,
                    mono_f,
                    &fann(&phi, &c_next),
                    &fand(&fann(&phi, &c_k), &ann_chi),
                    &a_next,
                );
                let mono_b = e.mono_and(&empty, bwd_k, &a_k, &fann(&phi, &c_k), &ann_chi);
                bwd_k = e.trans(
                    &empty,
                    mono_b,
                    bwd2,
                    &a_next,
                    &fand(&fann(&phi, &c_k), &ann_chi),
                    &fann(&phi, &c_next),
                );
                c_k = c_next;
                a_k = a_next;
            }
            let fwd_f = fimp(&fann(&phi, &c_k), &a_k);
            let bwd_f = fimp(&a_k, &fann(&phi, &c_k));
            e.rule(&empty, "Adj", vec![fwd_k, bwd_k], fand(&fwd_f, &bwd_f));
        }
    }
    Ok(())
}

/// A derivation flattened to primitive justifications, indices 0-based.
struct Prim {
    ctx: Ctx,
    formula: Formula,
    just: PrimJust,
}

enum PrimJust {
    Assume,
    Axiom(String, Option<Subst>),
    Rule(String, Vec<usize>),
}

fn primitivize(
    prefix: &[Line],
    idx: usize,
    out: &mut Vec<Prim>,
    memo: &mut HashMap<usize, usize>,
    depth: usize,
) -> Result<usize, String> {
    if let Some(&k) = memo.get(&idx) {
        return Ok(k);
    }
    if out.len() > MAX_LINES {
        return Err("macro expansion is too large".into());
    }
    let line = &prefix[idx];
    let k = match &line.justification {
        Justification::Assume => {
            out.push(Prim {
                ctx: line.context.clone(),
                formula: line.formula.clone(),
                just: PrimJust::Assume,
            });
            out.len() - 1
        }
        Justification::Axiom { scheme, subst } => {
            out.push(Prim {
                ctx: line.context.clone(),
                formula: line.formula.clone(),
                just: PrimJust::Axiom(scheme.clone(), subst.clone()),
            });
            out.len() - 1
        }
        Justification::Rule { name, premises } => {
            let mapped = premises
                .iter()
                .map(|&p| primitivize(prefix, p - 1, out, memo, depth))
                .collect::<Result<Vec<_>, _>>()?;
            out.push(Prim {
                ctx: line.context.clone(),
                formula: line.formula.clone(),
                just: PrimJust::Rule(name.clone(), mapped),
            });
            out.len() - 1
        }
        Justification::Macro { name, premises } => {
            let expansion = expand_inner(name, &prefix[..idx], premises, line, depth + 1)?;
            if expansion.is_empty() {
                return Err(format!("macro {name} produced an empty expansion"));
            }
            let base = idx;
            let mut local: Vec<usize> = Vec::with_capacity(expansion.len());
            for el in &expansion {
                let just = match &el.justification {
                    Justification::Assume => PrimJust::Assume,
                    Justification::Axiom { scheme, subst } => {
                        PrimJust::Axiom(scheme.clone(), subst.clone())
                    }
                    Justification::Rule { name, premises } => {
                        let mapped = premises
                            .iter()
                            .map(|&p| {
                                if p <= base {
                                    primitivize(prefix, p - 1, out, memo, depth)
                                } else {
                                    Ok(local[p - base - 1])
                                }
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        PrimJust::Rule(name.clone(), mapped)
                    }
                    Justification::Macro { .. } => {
                        return Err("internal: macro expansion emitted a macro line".into());
                    }
                };
                local.push(out.len());
                out.push(Prim {
                    ctx: el.context.clone(),
                    formula: el.formula.clone(),
                    just,
                });
            }
            *local.last().expect("nonempty expansion")
        }
    };
    memo.insert(idx, k);
    Ok(k)
}

fn lift_of(
    e: &mut Expander,
    prim: &[Prim],
    d: &Formula,
    lifted: &[Option<usize>],
    copied: &[Option<usize>],
    weakened: &mut [Option<usize>],
    u: usize,
) -> Result<usize, String> {
    if prim[u].ctx.contains(d) {
        return lifted[u].ok_or_else(|| "internal: lifted line missing".into());
    }
    if let Some(w) = weakened[u] {
        return Ok(w);
    }
    let c = copied[u].ok_or("internal: copied line missing")?;
    let ctx = prim[u].ctx.clone();
    let w = e.weaken_imp(&ctx, c, d, &prim[u].formula.clone());
    weakened[u] = Some(w);
    Ok(w)
}

fn expand_dt(
    prefix: &[Line],
    premise_idx: usize,
    stated: &Line,
    depth: usize,
) -> Result<Vec<Line>, String> {
    let premise = &prefix[premise_idx - 1];
    let Formula::Imp(d, body) = &stated.formula else {
        return Err("DT concludes an implication `d -> f` discharging `d`".into());
    };
    if **body != premise.formula {
        return Err(format!(
            "DT must conclude `d -> f` where f is the premise formula `{}`",
            render(&premise.formula)
        ));
    }
    let d = (**d).clone();
    let mut prim = Vec::new();
    let mut memo = HashMap::new();
    let root = primitivize(prefix, premise_idx - 1, &mut prim, &mut memo, depth)?;
    let mut e = Expander::new(prefix);
    let n = prim.len();
    let mut lifted: Vec<Option<usize>> = vec![None; n];
    let mut copied: Vec<Option<usize>> = vec![None; n];
    let mut weakened: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        if !prim[k].ctx.contains(&d) {
            // Untouched by the discharge: re-emit verbatim.
            let just = match &prim[k].just {
                PrimJust::Assume => Justification::Assume,
                PrimJust::Axiom(s, sub) => Justification::Axiom {
                    scheme: s.clone(),
                    subst: sub.clone(),
                },
                PrimJust::Rule(name, prems) => {
                    if prems.iter().any(|&u| prim[u].ctx.contains(&d)) {
                        // Only CN can shrink a context, so this is a
                        // discharge across CN.
                        return Err("cannot discharge a hypothesis across CN".into());
                    }
                    let mapped = prems
                        .iter()
                        .map(|&u| copied[u].ok_or("internal: copy order"))
                        .collect::<Result<Vec<_>, _>>()?;
                    Justification::Rule {
                        name: name.clone(),
                        premises: mapped,
                    }
                }
            };
            let ctx = prim[k].ctx.clone();
            copied[k] = Some(e.push(&ctx, prim[k].formula.clone(), just));
            continue;
        }
        let mut cx = prim[k].ctx.clone();
        cx.remove(&d);
        let f = prim[k].formula.clone();
        let idx = match &prim[k].just {
            PrimJust::Assume if f == d => e.rule(&cx, "t1", vec![], fimp(&d, &d)),
            PrimJust::Assume => {
                let a = e.push(&cx, f.clone(), Justification::Assume);
                e.weaken_imp(&cx, a, &d, &f)
            }
            PrimJust::Axiom(s, sub) => {
                let a = e.push(
                    &cx,
                    f.clone(),
                    Justification::Axiom {
                        scheme: s.clone(),
                        subst: sub.clone(),
                    },
                );
                e.weaken_imp(&cx, a, &d, &f)
            }
            PrimJust::Rule(name, prems) => match name.as_str() {
                "t1" => {
                    let a = e.rule(&cx, "t1", vec![], f.clone());
                    e.weaken_imp(&cx, a, &d, &f)
                }
                "MP" => {
                    let (a, b) =
                        as_imp(&prim[prems[0]].formula).ok_or("internal: MP premise shape")?;
                    let (a, b) = (a.clone(), b.clone());
                    let lu = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[0])?;
                    let lv = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[1])?;
                    e.mp_comb(&cx, lu, lv, &d, &a, &b)
                }
                "Adj" => {
                    let a = prim[prems[0]].formula.clone();
                    let b = prim[prems[1]].formula.clone();
                    let lu = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[0])?;
                    let lv = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[1])?;
                    e.and_intro(&cx, lu, lv, &d, &a, &b)
                }
                "dMP" => {
                    let (x, im) = prim[prems[0]]
                        .formula
                        .as_or()
                        .ok_or("internal: dMP premise shape")?;
                    let (a, b) = as_imp(im).ok_or("internal: dMP premise shape")?;
                    let (x, a, b) = (x.clone(), a.clone(), b.clone());
                    let lu = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[0])?;
                    let lv = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[1])?;
                    e.dmp_lift(&cx, lu, lv, &d, &x, &a, &b)
                }
                "dTrans" => {
                    let (r, im) = prim[prems[0]]
                        .formula
                        .as_or()
                        .ok_or("internal: dTrans premise shape")?;
                    let (a, b) = as_imp(im).ok_or("internal: dTrans premise shape")?;
                    let (_, im2) = prim[prems[1]]
                        .formula
                        .as_or()
                        .ok_or("internal: dTrans premise shape")?;
                    let (_, c) = as_imp(im2).ok_or("internal: dTrans premise shape")?;
                    let (r, a, b, c) = (r.clone(), a.clone(), b.clone(), c.clone());
                    let lu = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[0])?;
                    let lv = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[1])?;
                    e.dtrans_lift(&cx, lu, lv, &d, &r, &a, &b, &c)
                }
                "dECQ" => {
                    let (x, contra) = prim[prems[0]]
                        .formula
                        .as_or()
                        .ok_or("internal: dECQ premise shape")?;
                    let w = as_contradiction(contra).ok_or("internal: dECQ premise shape")?;
                    let (_, psi) = f.as_or().ok_or("internal: dECQ conclusion shape")?;
                    let (x, w, psi) = (x.clone(), w.clone(), psi.clone());
                    let lu = lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, prems[0])?;
                    e.decq_lift(&cx, lu, &d, &x, &w, &psi)
                }
                "IR" | "nec" | "intA1" | "intA2" | "intA2gen" => {
                    let u = prems[0];
                    if !prim[u].ctx.is_empty() {
                        return Err(format!("internal: {name} premise must be a theorem"));
                    }
                    let cu = copied[u].ok_or("internal: copy order")?;
                    let r = e.rule(&cx, name, vec![cu], f.clone());
                    e.weaken_imp(&cx, r, &d, &f)
                }
                "CN" => return Err("cannot discharge a hypothesis across CN".into()),
                other => return Err(format!("internal: unexpected rule `{other}` in DT")),
            },
        };
        lifted[k] = Some(idx);
        if e.lines.len() > MAX_LINES {
            return Err("macro expansion is too large".into());
        }
    }
    lift_of(&mut e, &prim, &d, &lifted, &copied, &mut weakened, root)?;
    Ok(e.lines)
}
