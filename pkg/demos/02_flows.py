# coding: utf-8

# # Flows without expanding
#
# All-s-t flow treats every instance of `s` as a source and every instance
# of `t` as a sink. Scaling each edge by the parameters above it reduces the
# question to one ordinary max flow on the template graph itself.

# In[1]:

import time

from pgtemplates import brute_force_all_st_flow, edge_reweight, max_all_st_flow, max_single_st_flow
from pgtemplates.instantiate import stats
from pgtemplates.samples import ex_in, ex_path, ex_sib

print([e.weight for e in edge_reweight(ex_path(3)).edges])
print("template:", max_all_st_flow(ex_path(3), "s", "t").value)
print("expanded:", brute_force_all_st_flow(ex_path(3), "s", "t").value)


# The cost does not depend on the parameters. A loop of 2^64 iterations
# takes as long as a loop of two, and nothing gets expanded.

# In[2]:

before = stats["instantiate"]
for p in (2, 2**64):
    t0 = time.perf_counter()
    value = max_all_st_flow(ex_path(p), "s", "t").value
    print(f"P={p}: flow {value} in {1e6 * (time.perf_counter() - t0):.0f}us")
print("expansions performed:", stats["instantiate"] - before)


# Sibling edges wire instance `j` of a template to instance `f(j)`. In this
# fixture the four copies of `u` form a ring.

# In[3]:

print(max_all_st_flow(ex_sib(), "s", "t").value, brute_force_all_st_flow(ex_sib(), "s", "t").value)


# Single-s-t flow picks one instance at each end. The template is rewritten
# so that both chosen instances sit in the root, then solved the same way.

# In[4]:

res = max_single_st_flow(ex_in(), "s", (), "t", (1,))
print("flow to t@1:", res.value)
print("source side of a minimum cut:", sorted(res.source_side))
res.check()
