use num_complex::Complex64;

use crate::clock::root_of_unity;
use crate::error::{Error, Result};
use crate::geometry::{CoveringLattice, VertexKind};

/// Target number of canonical chunks; the chunking depends only on `N` and the
/// number of spins, never on the worker count.
const TARGET_CHUNKS: u128 = 256;

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ChunkSum {
    pub z: f64,
    pub num: Complex64,
}

/// A compiled enumeration: spins in a fixed order, per-edge weight tables
/// with string shifts applied, and spectator charges.
pub(crate) struct Plan {
    n: u32,
    spins: usize,
    /// For spin `i`, the edges to earlier spins: `(earlier position, table, i is P1)`.
    back_edges: Vec<Vec<(usize, usize, bool)>>,
    tables: Vec<Vec<f64>>,
    charges: Vec<u32>,
    phases: Vec<Complex64>,
    prefix_len: usize,
}

impl Plan {
    /// `shifts[e]` is the net substitution `d → d - shift` on primal edge `e`;
    /// `charges` maps primal vertex ids to spectator powers.
    pub(crate) fn new(lat: &CoveringLattice, shifts: &[i64], charges: &[(usize, i64)], cap: u64) -> Result<Self> {
        let n = lat.weights_modulus()?;
        let ids = lat.ids_of(VertexKind::Primal);
        let mut pos = vec![usize::MAX; lat.vertices().len()];
        for (i, &id) in ids.iter().enumerate() {
            pos[id] = i;
        }
        let spins = ids.len();
        let required = (n as u128).checked_pow(spins as u32).unwrap_or(u128::MAX);
        if required > cap as u128 {
            return Err(Error::BudgetExceeded { required, cap });
        }
        let mut back_edges = vec![Vec::new(); spins];
        let mut tables = Vec::with_capacity(lat.primal_edges().len());
        for (e, edge) in lat.primal_edges().iter().enumerate() {
            let w = edge.weights.as_ref().ok_or(Error::MissingWeights(e))?;
            let shift = shifts[e];
            tables.push((0..n as i64).map(|d| w.eval_unchecked(d - shift)).collect());
            let (a, b) = (pos[edge.p1], pos[edge.p2]);
            if a > b {
                back_edges[a].push((b, e, true));
            } else {
                back_edges[b].push((a, e, false));
            }
        }
        let mut ch = vec![0u32; spins];
        for &(v, power) in charges {
            if v >= pos.len() || pos[v] == usize::MAX {
                return Err(Error::InvalidLattice(format!("spectator {v} is not a primal vertex")));
            }
            ch[pos[v]] = ((ch[pos[v]] as i64 + power).rem_euclid(n as i64)) as u32;
        }
        let mut prefix_len = 0;
        while prefix_len < spins && (n as u128).pow(prefix_len as u32) < TARGET_CHUNKS {
            prefix_len += 1;
        }
        Ok(Self {
            n,
            spins,
            back_edges,
            tables,
            charges: ch,
            phases: (0..n as i64).map(|c| root_of_unity(n, c)).collect(),
            prefix_len,
        })
    }

    pub(crate) fn config_count(&self) -> u128 {
        (self.n as u128).pow(self.spins as u32)
    }

    pub(crate) fn chunk_count(&self) -> u64 {
        (self.n as u64).pow(self.prefix_len as u32)
    }

    fn local(&self, i: usize, q: &[u32]) -> f64 {
        let n = self.n;
        self.back_edges[i]
            .iter()
            .map(|&(j, e, first)| {
                let d = (if first { q[i] + n - q[j] } else { q[j] + n - q[i] }) % n;
                self.tables[e][d as usize]
            })
            .product()
    }

    /// Sums one chunk: the leading `prefix_len` spins fixed by `chunk`, the rest
    /// run through by an odometer with prefix products.
    pub(crate) fn run_chunk(&self, chunk: u64) -> ChunkSum {
        let (n, v, k) = (self.n, self.spins, self.prefix_len);
        let mut q = vec![0u32; v];
        let mut rem = chunk;
        for i in (0..k).rev() {
            q[i] = (rem % n as u64) as u32;
            rem /= n as u64;
        }
        let mut pw = vec![1.0f64; v + 1];
        let mut pc = vec![0u32; v + 1];
        let refresh = |from: usize, q: &[u32], pw: &mut [f64], pc: &mut [u32]| {
            for i in from..v {
                pw[i + 1] = pw[i] * self.local(i, q);
                pc[i + 1] = (pc[i] + self.charges[i] * q[i]) % n;
            }
        };
        refresh(0, &q, &mut pw, &mut pc);
        let (mut z, mut re, mut im) = (Compensated::default(), Compensated::default(), Compensated::default());
        loop {
            let w = pw[v];
            let ph = self.phases[pc[v] as usize];
            z.add(w);
            re.add(w * ph.re);
            im.add(w * ph.im);
            let mut i = v;
            loop {
                if i == k {
                    return ChunkSum {
                        z: z.value(),
                        num: Complex64::new(re.value(), im.value()),
                    };
                }
                i -= 1;
                q[i] += 1;
                if q[i] < n {
                    break;
                }
                q[i] = 0;
            }
            refresh(i, &q, &mut pw, &mut pc);
        }
    }

    /// Runs every chunk, split into `blocks` contiguous ranges, and reduces the
    /// chunk sums in chunk order.
    pub(crate) fn run(&self, blocks: usize) -> ChunkSum {
        let chunks = self.chunk_count();
        let blocks = (blocks.max(1) as u64).min(chunks);
        let ranges: Vec<(u64, u64)> = (0..blocks)
            .map(|b| (b * chunks / blocks, (b + 1) * chunks / blocks))
            .collect();
        let run_block = |&(lo, hi): &(u64, u64)| -> Vec<ChunkSum> { (lo..hi).map(|c| self.run_chunk(c)).collect() };
        let per_block: Vec<Vec<ChunkSum>> = self.dispatch(&ranges, run_block);
        let (mut z, mut re, mut im) = (Compensated::default(), Compensated::default(), Compensated::default());
        for s in per_block.iter().flatten() {
            z.add(s.z);
            re.add(s.num.re);
            im.add(s.num.im);
        }
        ChunkSum {
            z: z.value(),
            num: Complex64::new(re.value(), im.value()),
        }
    }

    #[cfg(feature = "parallel")]
    fn dispatch<F>(&self, ranges: &[(u64, u64)], f: F) -> Vec<Vec<ChunkSum>>
    where
        F: Fn(&(u64, u64)) -> Vec<ChunkSum> + Sync + Send,
    {
        use rayon::prelude::*;
        if ranges.len() <= 1 {
            return ranges.iter().map(f).collect();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(ranges.len()).build() {
            Ok(pool) => pool.install(|| ranges.par_iter().map(&f).collect()),
            Err(_) => ranges.iter().map(f).collect(),
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn dispatch<F>(&self, ranges: &[(u64, u64)], f: F) -> Vec<Vec<ChunkSum>>
    where
        F: Fn(&(u64, u64)) -> Vec<ChunkSum>,
    {
        ranges.iter().map(f).collect()
    }
}

/// Worker count used when the caller leaves it at 0.
pub(crate) fn default_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
