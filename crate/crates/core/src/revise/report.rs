//! Human-readable and `key=value` renderings of a revision.

use std::fmt::Write;

use super::{Partition, RevisionResult, Verdict};
use crate::syntax::render_kb;

fn indices(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn partition(p: &Partition) -> String {
    format!("conflicting {{{}}} retained {{{}}}", indices(&p.conflicting), indices(&p.retained))
}

impl RevisionResult {
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "partition: {}", partition(&self.partition));
        let _ = writeln!(out, "degrees: {}", self.degrees);
        let _ = writeln!(out, "cost: {}", self.total_cost);
        let _ = writeln!(out, "candidates: {}", self.trace.len());
        let _ = writeln!(out, "alternatives: {}", self.alternatives.len());
        for (p, d) in &self.alternatives {
            let _ = writeln!(out, "  {} degrees {d}", partition(p));
        }
        let _ = writeln!(out, "revised:");
        out.push_str(&render_kb(&self.revised));
        out
    }

    pub fn porcelain(&self) -> String {
        let vals = |d: &crate::relax::DegreeMap| d.values().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let _ = writeln!(out, "cost={}", self.total_cost);
        let _ = writeln!(out, "conflicting={}", indices(&self.partition.conflicting));
        let _ = writeln!(out, "retained={}", indices(&self.partition.retained));
        let _ = writeln!(out, "degrees={}", vals(&self.degrees));
        let _ = writeln!(out, "partitions={}", self.partitions.len());
        let _ = writeln!(out, "candidates={}", self.trace.len());
        let resolved = self.trace.iter().filter(|t| t.verdict == Verdict::Resolved).count();
        let _ = writeln!(out, "resolved_candidates={resolved}");
        let _ = writeln!(out, "alternatives={}", self.alternatives.len());
        for (i, (p, d)) in self.alternatives.iter().enumerate() {
            let _ = writeln!(
                out,
                "alternative.{i}=conflicting:{};retained:{};degrees:{}",
                indices(&p.conflicting),
                indices(&p.retained),
                vals(d)
            );
        }
        out
    }
}
