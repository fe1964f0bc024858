# Test package for staggered_chns
