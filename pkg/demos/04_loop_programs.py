# coding: utf-8

# # Parallel loops as templates
#
# Each loop body becomes a template whose parameter is the trip count. Typed
# vertices say what happens: `parfor` hands out the loop index, `read` and
# `write` touch arrays, `reduce` folds the values coming out of a child loop.

# In[1]:

from pgtemplates.loops import (
    build_cross_correlation,
    build_matmul,
    build_racy_write,
    data_movement_bound,
    interpret,
    validate_program,
)

mm = build_matmul(2, 2, 2)
print("violations:", validate_program(mm))
print("templates:", [(t, mm.pgt.parameter(t)) for t in mm.pgt.template_ids()])


# Running a program means expanding it and evaluating the instances in a
# topological order. Values are exact fractions.

# In[2]:

report = interpret(mm, {"A1": [[1, 2], [3, 4]], "A2": [[5, 6], [7, 8]]})
print(report.outputs["B"])
print(interpret(build_cross_correlation(3, 2), {"A1": [1, 2, 3], "A2": [10, 20]}).outputs["B"])


# Two writes to the same cell with no path between them are a data race.
# Every iteration of this loop writes `B[0]`.

# In[3]:

print(interpret(build_racy_write(3), {}).races)


# Setting loop-index edges to weight 0 and every other edge to 1 turns a max
# flow into an upper bound on how many values must cross between the
# processors running `s` and `t`.

# In[4]:

print("A1 -> B:", data_movement_bound(mm, "A1", "B"))
print("A1 -> one write:", data_movement_bound(mm, "A1", "wr", mode="single", addr_t=(1, 0)))
