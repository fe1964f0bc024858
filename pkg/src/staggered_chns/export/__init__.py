# Export package: writes summary tables.
