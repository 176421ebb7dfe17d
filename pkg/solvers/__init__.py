"""
Numerical core: conservation laws with a flux that switches from g to f at x=0.

Modules are layered bottom-up: errors -> stepfn/rootfind -> flux -> godunov,
hj_forward -> exterior/backward -> isotonic/control -> reachable.
"""
