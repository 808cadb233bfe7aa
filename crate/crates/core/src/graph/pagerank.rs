use super::Network;

pub const DAMPING: f64 = 0.85;
const TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 200;

/// PageRank by power iteration with uniform teleport.
///
/// Isolated nodes spread their mass uniformly. Iterates until the L1 change
/// drops below 1e-8 or 200 iterations have run.
pub fn pagerank(net: &Network) -> Vec<f64> {
    let n = net.node_count();
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    let degrees = net.degrees();
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for _ in 0..MAX_ITERATIONS {
        let dangling: f64 = (0..n).filter(|&u| degrees[u] == 0).map(|u| rank[u]).sum();
        let base = (1.0 - DAMPING) / nf + DAMPING * dangling / nf;
        next.iter_mut().for_each(|x| *x = base);
        for u in 0..n {
            if degrees[u] == 0 {
                continue;
            }
            let share = DAMPING * rank[u] / degrees[u] as f64;
            for &v in net.neighbors(u) {
                next[v as usize] += share;
            }
        }
        let change: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < TOLERANCE {
            break;
        }
    }
    let total: f64 = rank.iter().sum();
    rank.iter_mut().for_each(|x| *x /= total);
    rank
}
