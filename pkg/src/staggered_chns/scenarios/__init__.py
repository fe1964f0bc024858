# Scenarios package: initial data, manufactured forcing and error measures.
