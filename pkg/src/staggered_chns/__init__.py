# Makes this directory a Python package.
# The public entry points live in cli.py.
