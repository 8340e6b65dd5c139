# coding: utf-8

# # The two rewrites behind single-instance flow
#
# Instance merging pulls a vertex into the root by routing its cross-template
# edges through dummy vertices with infinite weight. The result behaves like
# the expansion with every copy of that vertex glued together.

# In[1]:

from pgtemplates import (
    contract_infinite_edges,
    instance_merge,
    instantiate,
    io,
    label_isomorphic,
    merge_vertex_instances,
    partial_instantiate_upwards,
)
from pgtemplates.samples import ex_in, figure_one

merged, relabel = instance_merge(ex_in(), "u")
print(io.serialize(merged))
left = contract_infinite_edges(instantiate(merged))
right = merge_vertex_instances(instantiate(ex_in()), "u")
print("isomorphic:", label_isomorphic(left, right, relabel))


# Partial instantiation instead keeps every instance apart. Each template on
# the way up is split into the chosen copy (parameter 1) and the rest
# (parameter P-1), then the chosen copies are dissolved into the root.

# In[2]:

pgt = figure_one()
pi = partial_instantiate_upwards(pgt, "e", (1, 2))
print("splits:", pi.splits, "templates now:", pi.pgt.template_ids())
print("e@1.2 is now", pi.relabeling.to_new("e", (1, 2)))
print("e~2@1 was", pi.relabeling.to_old("e~2", (1,)))
print("isomorphic:", label_isomorphic(instantiate(pi.pgt), instantiate(pgt), pi.relabeling))
