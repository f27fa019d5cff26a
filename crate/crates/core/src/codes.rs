//! Sum-rank metric codes: weights, minimum distance, duals, exact covering
//! radius by coset enumeration, rank supports and minimal-codeword analysis.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::config::{pow_log2, Config};
use crate::error::{Error, Result};
use crate::field::{FieldContext, Fqm};
use crate::linalg::Mat;

/// Block length profile n = (n_1, …, n_t), kept nonincreasing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SumRankProfile {
    n: Vec<usize>,
}

impl SumRankProfile {
    pub fn new(n: Vec<usize>) -> Result<SumRankProfile> {
        if n.is_empty() {
            return Err(Error::BadProfiles("profile must have t >= 1 blocks".into()));
        }
        if n.iter().any(|&x| x == 0) {
            return Err(Error::BadProfiles("block lengths must be positive".into()));
        }
        if n.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadProfiles(
                "block lengths must be nonincreasing".into(),
            ));
        }
        Ok(SumRankProfile { n })
    }

    pub fn t(&self) -> usize {
        self.n.len()
    }

    /// N = n_1 + … + n_t.
    pub fn total(&self) -> usize {
        self.n.iter().sum()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.n
    }

    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.n.len());
        let mut start = 0;
        for &len in &self.n {
            out.push(start..start + len);
            start += len;
        }
        out
    }

    /// Largest possible sum-rank weight, Σ min(n_i, m).
    pub fn max_weight(&self, m: u32) -> usize {
        self.n.iter().map(|&x| x.min(m as usize)).sum()
    }
}

/// The rank of a vector: the F_q-dimension of the span of its coordinates.
pub fn rank_weight(ctx: &FieldContext, v: &[Fqm]) -> usize {
    let mut m = Mat::zeros(0, ctx.m() as usize);
    for &x in v {
        m.push_row(&ctx.fq_coords(x));
    }
    m.rank(&ctx.fq_view())
}

/// Sum over blocks of the per-block rank.
pub fn sumrank_weight(ctx: &FieldContext, profile: &SumRankProfile, v: &[Fqm]) -> Result<usize> {
    if v.len() != profile.total() {
        return Err(Error::LengthMismatch {
            expected: profile.total(),
            got: v.len(),
        });
    }
    Ok(profile
        .ranges()
        .into_iter()
        .map(|r| rank_weight(ctx, &v[r]))
        .sum())
}

/// Per-block rank support: the F_q-row space of the m×n_i coordinate
/// expansion of each block, stored as an RREF basis inside F_q^{n_i}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankSupport {
    blocks: Vec<Mat>,
}

impl RankSupport {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rows()).collect()
    }

    /// Componentwise row-space inclusion `self ⊆ other`.
    pub fn contained_in(&self, other: &RankSupport, ctx: &FieldContext) -> bool {
        let f = ctx.fq_view();
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| (0..a.rows()).all(|i| b.rref_row_space_contains(a.row(i), &f)))
    }
}

/// The rank support of a word under the given profile.
pub fn rank_support(
    ctx: &FieldContext,
    profile: &SumRankProfile,
    v: &[Fqm],
) -> Result<RankSupport> {
    if v.len() != profile.total() {
        return Err(Error::LengthMismatch {
            expected: profile.total(),
            got: v.len(),
        });
    }
    let f = ctx.fq_view();
    let blocks = profile
        .ranges()
        .into_iter()
        .map(|r| {
            let mut m = Mat::zeros(0, r.len());
            // one row per F_q coordinate of the expansion
            for bit in 0..ctx.m() as usize {
                let row: Vec<u64> = v[r.clone()]
                    .iter()
                    .map(|&x| ctx.fq_coords(x)[bit])
                    .collect();
                m.push_row(&row);
            }
            m.rref_canon(&f)
        })
        .collect();
    Ok(RankSupport { blocks })
}

/// An F_{q^m}-linear sum-rank metric code, presented by a full-row-rank
/// generator matrix in block form (G_1 | … | G_t).
#[derive(Clone)]
pub struct SumRankCode {
    ctx: Arc<FieldContext>,
    profile: SumRankProfile,
    gen: Mat,
}

impl std::fmt::Debug for SumRankCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SumRankCode(k={}, n={:?}, q^m={})",
            self.k(),
            self.profile.blocks(),
            self.ctx.order()
        )
    }
}

impl SumRankCode {
    pub fn new(
        ctx: Arc<FieldContext>,
        profile: SumRankProfile,
        rows: Vec<Vec<Fqm>>,
    ) -> Result<SumRankCode> {
        let n = profile.total();
        for row in &rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let gen = if rows.is_empty() {
            Mat::zeros(0, n)
        } else {
            Mat::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|x| x.code()).collect())
                    .collect(),
            )
        };
        if gen.rank(&ctx.fqm_view()) != gen.rows() {
            return Err(Error::BadArgs(
                "generator rows are F_qm-linearly dependent".into(),
            ));
        }
        Ok(SumRankCode { ctx, profile, gen })
    }

    pub(crate) fn from_mat(
        ctx: Arc<FieldContext>,
        profile: SumRankProfile,
        gen: Mat,
    ) -> SumRankCode {
        debug_assert_eq!(gen.cols(), profile.total());
        debug_assert_eq!(gen.rank(&ctx.fqm_view()), gen.rows());
        SumRankCode { ctx, profile, gen }
    }

    /// The full ambient space F_{q^m}^n as a code.
    pub fn full_space(ctx: Arc<FieldContext>, profile: SumRankProfile) -> SumRankCode {
        let gen = Mat::identity(profile.total());
        SumRankCode { ctx, profile, gen }
    }

    /// The zero code {0}.
    pub fn zero_code(ctx: Arc<FieldContext>, profile: SumRankProfile) -> SumRankCode {
        let gen = Mat::zeros(0, profile.total());
        SumRankCode { ctx, profile, gen }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }
    pub fn profile(&self) -> &SumRankProfile {
        &self.profile
    }
    pub fn k(&self) -> usize {
        self.gen.rows()
    }
    pub fn n_total(&self) -> usize {
        self.profile.total()
    }

    pub fn generator_rows(&self) -> Vec<Vec<Fqm>> {
        (0..self.gen.rows())
            .map(|i| self.gen.row(i).iter().map(|&c| Fqm(c)).collect())
            .collect()
    }

    pub(crate) fn gen_mat(&self) -> &Mat {
        &self.gen
    }

    /// Whether every block's columns are F_q-linearly independent.
    pub fn is_nondegenerate(&self) -> bool {
        self.degenerate_block().is_none()
    }

    pub(crate) fn degenerate_block(&self) -> Option<usize> {
        let f = self.ctx.fq_view();
        for (i, r) in self.profile.ranges().into_iter().enumerate() {
            let mut m = Mat::zeros(0, self.k() * self.ctx.m() as usize);
            for j in r {
                m.push_row(&self.flatten_col(j));
            }
            if m.rank(&f) != m.rows() {
                return Some(i);
            }
        }
        None
    }

    /// The F_q-coordinate flattening of column j of the generator matrix.
    fn flatten_col(&self, j: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k() * self.ctx.m() as usize);
        for i in 0..self.k() {
            out.extend(self.ctx.fq_coords(Fqm(self.gen.get(i, j))));
        }
        out
    }

    /// Encodes a message vector of length k.
    pub fn encode(&self, msg: &[Fqm]) -> Result<Vec<Fqm>> {
        if msg.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: msg.len(),
            });
        }
        let f = self.ctx.fqm_view();
        let m = Mat::from_rows(vec![msg.iter().map(|x| x.code()).collect()]);
        let w = m.mul(&self.gen, &f);
        Ok(w.row(0).iter().map(|&c| Fqm(c)).collect())
    }

    /// The dual code w.r.t. the standard bilinear form x·y = Σ x_i y_i.
    pub fn dual(&self) -> SumRankCode {
        let f = self.ctx.fqm_view();
        let kernel = self.gen.right_kernel(&f);
        SumRankCode {
            ctx: Arc::clone(&self.ctx),
            profile: self.profile.clone(),
            gen: kernel,
        }
    }

    /// Minimum sum-rank weight over nonzero codewords, brute-forced, and
    /// cross-checked against the hyperplane-intersection formula whenever the
    /// code is nondegenerate. A mismatch there is a bug, not bad input.
    pub fn min_distance(&self, cfg: &Config) -> Result<usize> {
        let k = self.k();
        if k == 0 {
            return Err(Error::BadArgs(
                "minimum distance of the zero code is undefined".into(),
            ));
        }
        let qm = self.ctx.order();
        cfg.check_enum(
            "minimum distance codeword enumeration",
            pow_log2(qm, k as u32),
        )?;
        let mut best = usize::MAX;
        let zero_rep = vec![0u64; self.n_total()];
        let tables = WeightTables::build(&self.ctx, &self.profile, cfg);
        self.scan_coset(&zero_rep, &tables, true, &mut |w| {
            best = best.min(w);
            best == 1
        });
        let direct = best;

        if self.is_nondegenerate() {
            let formula = self.min_distance_via_hyperplanes(cfg)?;
            if formula != direct {
                return Err(Error::InternalDisagreement(format!(
                    "min distance: brute force {direct} vs hyperplane formula {formula}"
                )));
            }
        }
        Ok(direct)
    }

    /// d = N − max_H Σ_i dim_{F_q}(U_i ∩ H) over F_{q^m}-hyperplanes H.
    fn min_distance_via_hyperplanes(&self, cfg: &Config) -> Result<usize> {
        let k = self.k();
        let qm = self.ctx.order();
        cfg.check_enum("hyperplane enumeration", pow_log2(qm, k as u32))?;
        let blocks = self.block_fq_bases();
        let mut best_sum = 0usize;
        for_each_projective_point(qm, k, &mut |normal| {
            let h_basis = self.hyperplane_fq_basis(normal);
            let sum: usize = blocks
                .iter()
                .map(|b| intersect_dim(b, &h_basis, &self.ctx))
                .sum();
            best_sum = best_sum.max(sum);
            false
        });
        Ok(self.n_total() - best_sum)
    }

    /// Per-block F_q-generating sets (rows = flattened columns of G_i).
    pub(crate) fn block_fq_bases(&self) -> Vec<Mat> {
        self.profile
            .ranges()
            .into_iter()
            .map(|r| {
                let mut m = Mat::zeros(0, self.k() * self.ctx.m() as usize);
                for j in r {
                    m.push_row(&self.flatten_col(j));
                }
                m
            })
            .collect()
    }

    /// F_q-basis (as flattened rows) of the hyperplane x·normal = 0.
    pub(crate) fn hyperplane_fq_basis(&self, normal: &[u64]) -> Mat {
        let f = self.ctx.fqm_view();
        let nm = Mat::from_rows(vec![normal.to_vec()]);
        let kernel = nm.right_kernel(&f); // k-1 rows over F_qm for nonzero normal
        let mut out = Mat::zeros(0, self.k() * self.ctx.m() as usize);
        for i in 0..kernel.rows() {
            let vrow: Vec<Fqm> = kernel.row(i).iter().map(|&c| Fqm(c)).collect();
            for j in 0..self.ctx.m() as usize {
                let beta_j = Fqm(self.ctx.q().pow(j as u32));
                let scaled: Vec<Fqm> = vrow.iter().map(|&x| self.ctx.mul(beta_j, x)).collect();
                out.push_row(&flatten_fq(&self.ctx, &scaled));
            }
        }
        out
    }

    /// Exact sum-rank covering radius: the q^{m(N−k)} cosets are enumerated
    /// through a complement of the row space, each coset's minimum weight is
    /// computed over its q^{mk} elements, and the maximum is returned.
    pub fn covering_radius(&self, cfg: &Config) -> Result<usize> {
        let n = self.n_total();
        let k = self.k();
        let qm = self.ctx.order();
        if k == n {
            return Ok(0);
        }
        cfg.check_enum("covering radius coset enumeration", pow_log2(qm, n as u32))?;
        let f = self.ctx.fqm_view();
        let mut rref = self.gen.clone();
        let pivots = rref.rref(&f);
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let tables = WeightTables::build(&self.ctx, &self.profile, cfg);

        let jobs = cfg.jobs.max(1);
        if jobs == 1 {
            let mut global_max = 0usize;
            for rep in RepIter::new(qm, &free, n) {
                let min_w = self.coset_min_weight(&rep, &tables, global_max);
                global_max = global_max.max(min_w);
            }
            Ok(global_max)
        } else {
            let all_reps: Vec<Vec<u64>> = RepIter::new(qm, &free, n).collect();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::BadArgs(format!("thread pool: {e}")))?;
            let max = pool.install(|| {
                use rayon::prelude::*;
                all_reps
                    .par_chunks(1024)
                    .map(|chunk| {
                        let mut local = 0usize;
                        for rep in chunk {
                            let w = self.coset_min_weight(rep, &tables, local);
                            local = local.max(w);
                        }
                        local
                    })
                    .reduce(|| 0, usize::max)
            });
            Ok(max)
        }
    }

    /// Minimum weight in the coset rep + C. Scanning stops early once the
    /// running minimum drops to `cutoff` or below, which cannot change the
    /// covering-radius maximum.
    fn coset_min_weight(&self, rep: &[u64], tables: &WeightTables, cutoff: usize) -> usize {
        let mut best = usize::MAX;
        self.scan_coset(rep, tables, false, &mut |w| {
            best = best.min(w);
            best <= cutoff
        });
        best
    }

    /// Enumerates rep + C (optionally skipping the zero message) and feeds
    /// each element's weight to `visit`; stops when `visit` returns true.
    ///
    /// Messages are walked through a base-p odometer over their k·e·m
    /// F_p-digits. Each digit position owns one precomputed scaled generator
    /// row, so an odometer step is a single vector addition, and a digit
    /// rollover restores the buffer because p equal additions cancel.
    fn scan_coset(
        &self,
        rep: &[u64],
        tables: &WeightTables,
        skip_zero_message: bool,
        visit: &mut dyn FnMut(usize) -> bool,
    ) {
        let k = self.k();
        let p = self.ctx.p();
        let em = (self.ctx.e() * self.ctx.m()) as usize;
        let n = self.n_total();
        // step_rows[i*em + b] = ω_b · row_i, with ω_b the element of code p^b
        let mut step_rows: Vec<Vec<u64>> = Vec::with_capacity(k * em);
        for i in 0..k {
            for b in 0..em {
                let omega = Fqm(p.pow(b as u32));
                let row: Vec<u64> = self
                    .gen
                    .row(i)
                    .iter()
                    .map(|&c| self.ctx.mul_code(omega.0, c))
                    .collect();
                step_rows.push(row);
            }
        }
        let mut cur = rep.to_vec();
        let mut digits = vec![0u64; k * em];
        loop {
            if !(skip_zero_message && digits.iter().all(|&d| d == 0)) {
                let w = tables.weight(&self.ctx, &self.profile, &cur);
                if visit(w) {
                    return;
                }
            }
            let mut i = 0;
            loop {
                if i == k * em {
                    return;
                }
                digits[i] += 1;
                let row = &step_rows[i];
                for j in 0..n {
                    cur[j] = self.ctx.add_code(cur[j], row[j]);
                }
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// The weight of the codeword of `msg` computed through the associated
    /// system: w(xG) = N − Σ_i dim_{F_q}(U_i ∩ x⊥). This is the independent
    /// route cross-validated against [`sumrank_weight`] in the tests.
    pub fn weight_via_system(&self, msg: &[Fqm]) -> Result<usize> {
        if msg.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: msg.len(),
            });
        }
        if msg.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroMessage);
        }
        if let Some(block) = self.degenerate_block() {
            return Err(Error::Degenerate { block });
        }
        let normal: Vec<u64> = msg.iter().map(|x| x.code()).collect();
        let h_basis = self.hyperplane_fq_basis(&normal);
        let blocks = self.block_fq_bases();
        let sum: usize = blocks
            .iter()
            .map(|b| intersect_dim(b, &h_basis, &self.ctx))
            .sum();
        Ok(self.n_total() - sum)
    }

    /// Rank support of an arbitrary word of the ambient space.
    pub fn support(&self, v: &[Fqm]) -> Result<RankSupport> {
        rank_support(&self.ctx, &self.profile, v)
    }

    /// Checks whether every nonzero codeword is minimal; returns a violating
    /// pair (c, c') with supp(c') ⊆ supp(c) and c' not proportional to c
    /// otherwise.
    pub fn is_minimal(&self, cfg: &Config) -> Result<MinimalityVerdict> {
        let k = self.k();
        let qm = self.ctx.order();
        if k == 0 {
            return Ok(MinimalityVerdict {
                minimal: true,
                witness: None,
            });
        }
        cfg.check_enum("minimality codeword enumeration", pow_log2(qm, k as u32))?;
        // one representative per projective message class
        let mut words: Vec<Vec<Fqm>> = Vec::new();
        for_each_projective_point(qm, k, &mut |pt| {
            let msg: Vec<Fqm> = pt.iter().map(|&c| Fqm(c)).collect();
            words.push(self.encode(&msg).expect("length"));
            false
        });
        cfg.check_enum(
            "minimality pairwise support scan",
            2.0 * (words.len().max(1) as f64).log2(),
        )?;
        let supports: Vec<RankSupport> = words
            .iter()
            .map(|w| rank_support(&self.ctx, &self.profile, w).expect("length"))
            .collect();
        for (i, si) in supports.iter().enumerate() {
            for (j, sj) in supports.iter().enumerate() {
                if i == j {
                    continue;
                }
                if sj.contained_in(si, &self.ctx) {
                    return Ok(MinimalityVerdict {
                        minimal: false,
                        witness: Some((words[i].clone(), words[j].clone())),
                    });
                }
            }
        }
        Ok(MinimalityVerdict {
            minimal: true,
            witness: None,
        })
    }
}

/// Verdict of [`SumRankCode::is_minimal`].
#[derive(Clone, Debug)]
pub struct MinimalityVerdict {
    pub minimal: bool,
    /// On failure: (c, c') with supp(c') ⊆ supp(c), c' ≁ c.
    pub witness: Option<(Vec<Fqm>, Vec<Fqm>)>,
}

/// Coset representatives: all vectors supported on the free (non-pivot)
/// columns of the generator's RREF.
struct RepIter {
    qm: u64,
    free: Vec<usize>,
    n: usize,
    idx: u128,
    count: u128,
}

impl RepIter {
    fn new(qm: u64, free: &[usize], n: usize) -> RepIter {
        RepIter {
            qm,
            free: free.to_vec(),
            n,
            idx: 0,
            count: (qm as u128).pow(free.len() as u32),
        }
    }
}

impl Iterator for RepIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.idx >= self.count {
            return None;
        }
        let mut v = vec![0u64; self.n];
        let mut x = self.idx;
        for &c in &self.free {
            v[c] = (x % self.qm as u128) as u64;
            x /= self.qm as u128;
        }
        self.idx += 1;
        Some(v)
    }
}

/// Flattens a vector of F_{q^m}^k into its mk F_q-coordinates.
pub(crate) fn flatten_fq(ctx: &FieldContext, v: &[Fqm]) -> Vec<u64> {
    let mut out = Vec::with_capacity(v.len() * ctx.m() as usize);
    for &x in v {
        out.extend(ctx.fq_coords(x));
    }
    out
}

/// dim(A ∩ B) = dim A + dim B − dim(A + B) for F_q-row spaces given as
/// generating rows.
pub(crate) fn intersect_dim(a: &Mat, b: &Mat, ctx: &FieldContext) -> usize {
    let f = ctx.fq_view();
    let da = a.rank(&f);
    let db = b.rank(&f);
    let mut stacked = a.clone();
    for i in 0..b.rows() {
        stacked.push_row(b.row(i));
    }
    da + db - stacked.rank(&f)
}

/// Visits one normalized representative (first nonzero coordinate = 1) of
/// every projective point of F_{q^m}^k; stops early if the visitor returns
/// true.
pub(crate) fn for_each_projective_point(
    qm: u64,
    k: usize,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) {
    let mut coords = vec![0u64; k];
    for lead in (0..k).rev() {
        for c in coords.iter_mut() {
            *c = 0;
        }
        coords[lead] = 1;
        let tail = k - lead - 1;
        let count = (qm as u128).pow(tail as u32);
        let mut v = 0u128;
        while v < count {
            let mut x = v;
            for idx in lead + 1..k {
                coords[idx] = (x % qm as u128) as u64;
                x /= qm as u128;
            }
            if visit(&coords) {
                return;
            }
            v += 1;
        }
    }
}

/// Per-block-length rank lookup tables: table[fold] = rank of the block whose
/// coordinate codes fold to that index. Shared across blocks of equal length.
pub(crate) struct WeightTables {
    tables: BTreeMap<usize, Vec<u8>>,
}

impl WeightTables {
    pub fn build(ctx: &FieldContext, profile: &SumRankProfile, _cfg: &Config) -> WeightTables {
        let qm = ctx.order();
        let mut tables = BTreeMap::new();
        for &n in profile.blocks() {
            if tables.contains_key(&n) {
                continue;
            }
            // 64 MiB of u8 at most; larger blocks fall back to direct ranks
            if (n as f64) * (qm as f64).log2() <= 26.0 {
                tables.insert(n, build_rank_table(ctx, n));
            }
        }
        WeightTables { tables }
    }

    pub fn weight(&self, ctx: &FieldContext, profile: &SumRankProfile, v: &[u64]) -> usize {
        let qm = ctx.order();
        let mut total = 0usize;
        for r in profile.ranges() {
            let n = r.len();
            if let Some(tbl) = self.tables.get(&n) {
                let mut idx = 0u64;
                for &c in v[r].iter().rev() {
                    idx = idx * qm + c;
                }
                total += tbl[idx as usize] as usize;
            } else {
                let block: Vec<Fqm> = v[r].iter().map(|&c| Fqm(c)).collect();
                total += rank_weight(ctx, &block);
            }
        }
        total
    }
}

/// Builds the rank table for one block length by depth-first enumeration with
/// an incremental row-echelon state, O(m·rank) per entry.
fn build_rank_table(ctx: &FieldContext, n: usize) -> Vec<u8> {
    let qm = ctx.order();
    let size = (qm as u128).pow(n as u32) as usize;
    struct State<'a> {
        ctx: &'a FieldContext,
        qm: u64,
        n: usize,
        tbl: Vec<u8>,
        rows: Vec<Vec<u64>>,
        pivots: Vec<usize>,
    }
    impl State<'_> {
        fn rec(&mut self, depth: usize, idx: u64, stride: u64, rank: u8) {
            if depth == self.n {
                self.tbl[idx as usize] = rank;
                return;
            }
            for c in 0..self.qm {
                let child = idx + c * stride;
                let mut v = self.ctx.fq_coords(Fqm(c));
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    let coeff = v[p];
                    if coeff != 0 {
                        for (vi, ri) in v.iter_mut().zip(row) {
                            *vi = self
                                .ctx
                                .fq_add(*vi, self.ctx.fq_neg(self.ctx.fq_mul(coeff, *ri)));
                        }
                    }
                }
                if let Some(p) = v.iter().position(|&x| x != 0) {
                    let inv = self.ctx.fq_inv(v[p]).expect("nonzero pivot");
                    if inv != 1 {
                        for vi in v.iter_mut() {
                            *vi = self.ctx.fq_mul(*vi, inv);
                        }
                    }
                    self.rows.push(v);
                    self.pivots.push(p);
                    self.rec(depth + 1, child, stride * self.qm, rank + 1);
                    self.rows.pop();
                    self.pivots.pop();
                } else {
                    self.rec(depth + 1, child, stride * self.qm, rank);
                }
            }
        }
    }
    let mut st = State {
        ctx,
        qm,
        n,
        tbl: vec![0u8; size],
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    st.rec(0, 0, 1, 0);
    st.tbl
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldContext> {
        FieldContext::new(2, 1, 2).unwrap()
    }

    fn els(v: &[u64]) -> Vec<Fqm> {
        v.iter().map(|&c| Fqm(c)).collect()
    }

    #[test]
    fn profile_validation() {
        assert!(SumRankProfile::new(vec![3, 2, 2, 1]).is_ok());
        assert!(SumRankProfile::new(vec![1, 2]).is_err());
        assert!(SumRankProfile::new(vec![2, 0]).is_err());
        assert!(SumRankProfile::new(vec![]).is_err());
    }

    #[test]
    fn rank_weight_examples() {
        let ctx = f4();
        assert_eq!(rank_weight(&ctx, &els(&[0, 0, 0])), 0);
        assert_eq!(rank_weight(&ctx, &els(&[1, 2])), 2); // (1, α)
        assert_eq!(rank_weight(&ctx, &els(&[1, 2, 3])), 2); // α+1 depends on {1, α}
    }

    #[test]
    fn sumrank_weight_examples() {
        let ctx = f4();
        let p = SumRankProfile::new(vec![2, 1]).unwrap();
        assert_eq!(sumrank_weight(&ctx, &p, &els(&[0, 0, 0])).unwrap(), 0);
        assert_eq!(sumrank_weight(&ctx, &p, &els(&[1, 2, 1])).unwrap(), 3);
        assert_eq!(sumrank_weight(&ctx, &p, &els(&[1, 1, 2])).unwrap(), 2);
        assert!(matches!(
            sumrank_weight(&ctx, &p, &els(&[1, 1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn weight_tables_match_direct() {
        let ctx = f4();
        let p = SumRankProfile::new(vec![2, 1]).unwrap();
        let cfg = Config::default();
        let tables = WeightTables::build(&ctx, &p, &cfg);
        for v0 in 0..4u64 {
            for v1 in 0..4u64 {
                for v2 in 0..4u64 {
                    let v = vec![v0, v1, v2];
                    let direct = sumrank_weight(&ctx, &p, &els(&v)).unwrap();
                    assert_eq!(tables.weight(&ctx, &p, &v), direct);
                }
            }
        }
    }

    #[test]
    fn min_distance_examples() {
        let ctx = f4();
        let cfg = Config::default();

        let full = SumRankCode::full_space(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![1, 1]).unwrap(),
        );
        assert_eq!(full.min_distance(&cfg).unwrap(), 1);

        let c1 = SumRankCode::new(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![2]).unwrap(),
            vec![els(&[1, 2])],
        )
        .unwrap();
        assert_eq!(c1.min_distance(&cfg).unwrap(), 2);

        // independent F_4 oracle: hand-coded multiplication table, xor
        // addition, bit-level F_2 rank
        let mul = |a: u64, b: u64| -> u64 {
            const T: [[u64; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
            T[a as usize][b as usize]
        };
        let rank2 = |v: &[u64]| -> usize {
            let mut basis: Vec<u64> = Vec::new();
            for &x in v {
                let mut y = x;
                for &b in &basis {
                    y = y.min(y ^ b);
                }
                if y != 0 {
                    basis.push(y);
                    basis.sort_unstable_by(|a, b| b.cmp(a));
                }
            }
            basis.len()
        };
        let g1 = [1u64, 0, 0, 1];
        let g2 = [0u64, 1, 2, 0];
        let mut oracle_min = usize::MAX;
        for a in 0..4u64 {
            for b in 0..4u64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let w: Vec<u64> = (0..4).map(|j| mul(a, g1[j]) ^ mul(b, g2[j])).collect();
                let wt = rank2(&w[..2]) + rank2(&w[2..]);
                oracle_min = oracle_min.min(wt);
            }
        }
        assert_eq!(oracle_min, 2);

        let c2 = SumRankCode::new(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![2, 2]).unwrap(),
            vec![els(&[1, 0, 0, 1]), els(&[0, 1, 2, 0])],
        )
        .unwrap();
        assert_eq!(c2.min_distance(&cfg).unwrap(), oracle_min);
    }

    #[test]
    fn dual_examples() {
        let ctx = f4();
        let p2 = SumRankProfile::new(vec![1, 1]).unwrap();
        let full = SumRankCode::full_space(Arc::clone(&ctx), p2.clone());
        assert_eq!(full.dual().k(), 0);

        let c = SumRankCode::new(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![2]).unwrap(),
            vec![els(&[1, 2])],
        )
        .unwrap();
        let d = c.dual();
        assert_eq!(d.k(), 1);
        let drow = d.generator_rows().remove(0);
        let dot = ctx.add(ctx.mul(Fqm(1), drow[0]), ctx.mul(Fqm(2), drow[1]));
        assert!(dot.is_zero());
        let dd = d.dual();
        let f = ctx.fqm_view();
        assert_eq!(dd.gen_mat().rref_canon(&f), c.gen_mat().rref_canon(&f));

        let zero = SumRankCode::zero_code(Arc::clone(&ctx), p2);
        assert_eq!(zero.dual().k(), 2);
    }

    #[test]
    fn covering_radius_edges() {
        let ctx = f4();
        let cfg = Config::default();
        let p = SumRankProfile::new(vec![2, 1]).unwrap();
        let full = SumRankCode::full_space(Arc::clone(&ctx), p.clone());
        assert_eq!(full.covering_radius(&cfg).unwrap(), 0);
        let zero = SumRankCode::zero_code(Arc::clone(&ctx), p.clone());
        assert_eq!(zero.covering_radius(&cfg).unwrap(), 3); // Σ min(n_i, m)

        let p1 = SumRankProfile::new(vec![2]).unwrap();
        let zero1 = SumRankCode::zero_code(Arc::clone(&ctx), p1);
        assert_eq!(zero1.covering_radius(&cfg).unwrap(), 2);
    }

    #[test]
    fn covering_radius_a21_dual() {
        // A_{2,1} over F_4: rows (1,0,0),(0,1,α), single block of length 3
        let ctx = f4();
        let cfg = Config::default();
        let c = SumRankCode::new(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![3]).unwrap(),
            vec![els(&[1, 0, 0]), els(&[0, 1, 2])],
        )
        .unwrap();
        assert_eq!(c.dual().covering_radius(&cfg).unwrap(), 1);
    }

    #[test]
    fn covering_radius_parallel_agrees() {
        let ctx = f4();
        let c = SumRankCode::new(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![2, 1]).unwrap(),
            vec![els(&[1, 0, 1])],
        )
        .unwrap();
        let serial = c.covering_radius(&Config::default()).unwrap();
        let cfg = Config {
            jobs: 3,
            ..Config::default()
        };
        assert_eq!(c.covering_radius(&cfg).unwrap(), serial);
    }

    #[test]
    fn weight_via_system_example() {
        let ctx = f4();
        let c = SumRankCode::new(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![2, 1]).unwrap(),
            vec![els(&[1, 0, 0]), els(&[0, 1, 1])],
        )
        .unwrap();
        let w = c.weight_via_system(&els(&[1, 0])).unwrap();
        assert_eq!(w, 1);
        let direct =
            sumrank_weight(&ctx, c.profile(), &c.encode(&els(&[1, 0])).unwrap()).unwrap();
        assert_eq!(w, direct);
        assert!(matches!(
            c.weight_via_system(&els(&[0, 0])),
            Err(Error::ZeroMessage)
        ));
    }

    #[test]
    fn rank_support_examples() {
        let ctx = f4();
        let p = SumRankProfile::new(vec![2, 1]).unwrap();
        let zero = rank_support(&ctx, &p, &els(&[0, 0, 0])).unwrap();
        assert_eq!(zero.dims(), vec![0, 0]);

        let s = rank_support(&ctx, &p, &els(&[1, 2, 1])).unwrap();
        assert_eq!(s.dims(), vec![2, 1]);

        for lambda in 1..4u64 {
            let scaled: Vec<Fqm> = els(&[1, 2, 1])
                .iter()
                .map(|&x| ctx.mul(Fqm(lambda), x))
                .collect();
            let s2 = rank_support(&ctx, &p, &scaled).unwrap();
            assert_eq!(s2, s);
        }
    }

    #[test]
    fn minimality_examples() {
        let ctx = f4();
        let cfg = Config::default();
        // k = 1 codes are always minimal
        let c1 = SumRankCode::new(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![2]).unwrap(),
            vec![els(&[1, 2])],
        )
        .unwrap();
        assert!(c1.is_minimal(&cfg).unwrap().minimal);

        // the full space F_4^{(1,1)} is not minimal
        let full = SumRankCode::full_space(
            Arc::clone(&ctx),
            SumRankProfile::new(vec![1, 1]).unwrap(),
        );
        let v = full.is_minimal(&cfg).unwrap();
        assert!(!v.minimal);
        let (c, cp) = v.witness.unwrap();
        let sc = full.support(&c).unwrap();
        let scp = full.support(&cp).unwrap();
        assert!(scp.contained_in(&sc, &ctx));
    }

    #[test]
    fn triangle_inequality_random() {
        use rand::{Rng, SeedableRng};
        let ctx = FieldContext::new(2, 1, 2).unwrap();
        let p = SumRankProfile::new(vec![2, 2, 1]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut rv =
                |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Fqm> {
                    (0..5).map(|_| Fqm(rng.random_range(0..4))).collect()
                };
            let (x, y, z) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
            let d = |a: &[Fqm], b: &[Fqm]| -> usize {
                let diff: Vec<Fqm> = a.iter().zip(b).map(|(&u, &v)| ctx.sub(u, v)).collect();
                sumrank_weight(&ctx, &p, &diff).unwrap()
            };
            assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        }
    }

    #[test]
    fn covering_radius_monotone_under_subcodes() {
        let ctx = f4();
        let cfg = Config::default();
        let p = SumRankProfile::new(vec![2, 1]).unwrap();
        let big = SumRankCode::new(
            Arc::clone(&ctx),
            p.clone(),
            vec![els(&[1, 0, 0]), els(&[0, 1, 1])],
        )
        .unwrap();
        let small = SumRankCode::new(Arc::clone(&ctx), p, vec![els(&[1, 0, 0])]).unwrap();
        assert!(big.covering_radius(&cfg).unwrap() <= small.covering_radius(&cfg).unwrap());
    }
}
