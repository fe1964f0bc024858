# Eval package: smoke tests to verify the solver works end-to-end.
