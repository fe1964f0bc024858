# Integrate package: IMEX tableaus, the stage pipeline and the run loop.
