# Physics package: the spatial operators: convection, forces, Cahn-Hilliard, viscosity.
