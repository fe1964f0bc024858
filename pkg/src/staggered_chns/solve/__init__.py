# Solve package: matrix-free SPD solvers for the stage systems.
