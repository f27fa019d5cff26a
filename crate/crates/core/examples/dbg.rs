// debug scratch: dump dual + brute force covering radius independently
use sumrank::field::{FieldContext, Fqm};
use sumrank::codes::{SumRankCode, SumRankProfile, sumrank_weight};
use sumrank::Config;
use std::sync::Arc;

fn main() {
    let ctx = FieldContext::new(2, 1, 2).unwrap();
    let p = SumRankProfile::new(vec![3]).unwrap();
    let els = |v: &[u64]| -> Vec<Fqm> { v.iter().map(|&c| ctx.element(c).unwrap()).collect() };
    let c = SumRankCode::new(Arc::clone(&ctx), p.clone(), vec![els(&[1,0,0]), els(&[0,1,2])]).unwrap();
    let d = c.dual();
    println!("dual rows: {:?}", d.generator_rows());
    // brute force: all 64 vectors, min over 4 codewords
    let dual_words: Vec<Vec<Fqm>> = (0..4u64).map(|a| {
        let g = d.generator_rows().remove(0);
        g.iter().map(|&x| ctx.mul(ctx.element(a).unwrap(), x)).collect()
    }).collect();
    let mut maxmin = 0;
    let mut argmax = vec![];
    for x0 in 0..4u64 { for x1 in 0..4u64 { for x2 in 0..4u64 {
        let x = els(&[x0,x1,x2]);
        let mut mn = usize::MAX;
        for w in &dual_words {
            let diff: Vec<Fqm> = x.iter().zip(w).map(|(&a,&b)| ctx.sub(a,b)).collect();
            mn = mn.min(sumrank_weight(&ctx, &p, &diff).unwrap());
        }
        if mn > maxmin { maxmin = mn; argmax = vec![x0,x1,x2]; }
    }}}
    println!("brute force covering radius of dual: {} at {:?}", maxmin, argmax);
    println!("lib covering radius of dual: {}", d.covering_radius(&Config::default()).unwrap());
}
