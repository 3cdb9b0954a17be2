use normslab::exact::Base;
use normslab::tower::*;

fn main() {
    let mut pass = 0; let mut fail = 0; let mut weak = 0; let mut inc = 0; let mut rej = 0;
    let t0 = std::time::Instant::now();
    for (p, nmax, aux, d, r_t, seeds) in [
        (3u64, 2usize, vec![], 2usize, 1usize, 3u64),
        (3, 2, vec![2], 3, 1, 3),
        (3, 1, vec![2], 3, 2, 3),
        (5, 1, vec![], 2, 1, 3),
        (5, 1, vec![2], 3, 2, 2),
        (3, 2, vec![4], 4, 2, 2),
        (5, 2, vec![4], 4, 2, 1),
        (3, 3, vec![], 4, 2, 1),
        (3, 3, vec![4], 4, 2, 1),
    ] {
        for seed in 0..seeds {
            let cfg = TowerConfig { p, top_level: nmax, aux_invariants: aux.clone(), base: Base::Int, d, r_t, seed: seed * 1000 + 17 };
            let t = std::time::Instant::now();
            let cx = match generate_complex(&cfg) {
                Ok(cx) => cx,
                Err(e) => { println!("REJECT p={p} N={nmax} aux={aux:?} d={d} seed={seed}: {e}"); rej += 1; continue; }
            };
            let mut line = format!("p={p} N={nmax} aux={aux:?} d={d} r_t={r_t} s={seed} att={}", cx.stats().attempts);
            for n in 0..=nmax {
                for (name, v) in [
                    ("desc", verify_descent(&cx, r_t, n)),
                    ("strc", verify_structure_c(&cx, r_t, n)),
                    ("dgyA", verify_dodgy(&cx, n, DodgyPart::A)),
                    ("dgyB", verify_dodgy(&cx, n, DodgyPart::B)),
                    ("dgyC", verify_dodgy(&cx, n, DodgyPart::C)),
                ] {
                    match v {
                        Ok(Verdict::Pass) => pass += 1,
                        Ok(Verdict::WeakPass(_)) => { weak += 1; line += &format!(" {name}{n}=W"); }
                        Ok(Verdict::Fail(msg)) => { fail += 1; line += &format!(" {name}{n}=FAIL[{}]", &msg[..msg.len().min(80)]); }
                        Ok(Verdict::Inconclusive(_)) => { inc += 1; line += &format!(" {name}{n}=I"); }
                        Err(e) => { fail += 1; line += &format!(" {name}{n}=ERR[{e}]"); }
                    }
                }
            }
            match build_pairing(&cx) {
                Ok(rep) => {
                    if rep.verdict != PairingVerdict::Perfect { fail += 1; line += " pair=DEGEN"; }
                    else if !rep.ext_verdict.at_least_invariants() { fail += 1; line += " ext=DIST"; }
                    else { pass += 1; }
                }
                Err(e) => line += &format!(" pair=PRE[{e}]"),
            }
            match eta_fitting_membership(&cx) {
                Ok((true, eq)) => { pass += 1; if !eq { line += " etaEq=no"; } }
                Ok((false, _)) => { fail += 1; line += " eta=FAIL"; }
                Err(e) => line += &format!(" eta=ERR[{e}]"),
            }
            println!("{line} [{:?}]", t.elapsed());
        }
    }
    println!("\ntotal: pass={pass} weak={weak} fail={fail} inconclusive={inc} rejected={rej} in {:?}", t0.elapsed());
}
