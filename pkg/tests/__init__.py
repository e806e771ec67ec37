# Tests package for rational-ptc
