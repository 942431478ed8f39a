//! Benchmarks for the kernels in `supertorsion`; see `benches/`.
