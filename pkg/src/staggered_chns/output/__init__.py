# Output package: diagnostics and snapshot writers.
