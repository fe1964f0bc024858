# Ops package: 1D finite-difference matrices and the Neumann Laplacian.
