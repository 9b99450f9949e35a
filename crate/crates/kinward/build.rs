fn main() {
    // BLAS/LAPACK symbols (cblas_*, dsyevd_, ...) come from the system OpenBLAS.
    println!("cargo:rustc-link-lib=openblas");
}
