# coding: utf-8

# # Building a parametric graph template
#
# A template graph describes a big graph by saying which parts repeat and
# how often. Here we build the four-template fixture used throughout the
# tests, check it, and expand it.

# In[1]:

from pgtemplates import (
    boundary_vertices,
    export_dot,
    instantiate,
    instantiation_size,
    is_template_acyclic,
    template_of,
    tree_height,
    validate,
)
from pgtemplates.samples import figure_one

pgt = figure_one()
print(pgt)


# The root `T0` owns `a f g i`. `T1` repeats `b` twice. `T2` repeats the
# pair `c d` twice and nests `T3`, which repeats `e` three times inside
# every copy of `T2`.

# In[2]:

print("violations:", validate(pgt))
print("height:", tree_height(pgt))
print("e lives in", template_of(pgt, "e"), "on path", pgt.vertex_path("e"))
print("boundary of T2:", sorted(boundary_vertices(pgt, "T2")))


# The size of the expansion follows from the parameters alone.

# In[3]:

n, m = instantiation_size(pgt)
print(f"instantiation: {n} vertices, {m} edges")
g = instantiate(pgt)
print(sorted(g.vertex_ids()))


# Instance ids read `origin@i0.i1`, one index per template below the root.
# So `e@1.2` is the third `e` inside the second copy of `T2`.

# In[4]:

ok, witness = is_template_acyclic(pgt)
print("template-acyclic:", ok, "witness:", witness)


# A path that leaves a template and comes back is a template-cycle. Here
# `a -> b -> f` leaves the root for `T1` and returns.

# In[5]:

print(export_dot(pgt))
