"""
Partitions and the Rogers-Ramanujan identities
==============================================

"""

# In[1]:

from qbailey import INF, PochSpec, poch, invert, triple_product
from qbailey.dsl import eval_expr, parse_expr

N = 30

# The reciprocal of the Euler product counts all partitions of n.

# In[2]:

euler = poch(PochSpec(1, 0, 1, 1, INF), N)
p = invert(euler)
print("p(n):", p.q_coeffs()[:15])


# The same series from the expression language. Evaluation is exact, so the
# two agree term by term.

# In[3]:

p2 = eval_expr(parse_expr("1 / poch(q; q; inf)"), N)
print(p == p2)


# Partitions whose parts differ by at least two. The sum side of the first
# identity:

# In[4]:

gaps = eval_expr(parse_expr("sum(n>=0) { q^(n^2) / poch(q; q; n) }"), N)
print("gap partitions:", gaps.q_coeffs()[:15])


# Parts congruent to 1 or 4 mod 5. The triple product packages the three
# infinite factors (q, q^4, q^5; q^5).

# In[5]:

mod5 = triple_product(2, 5, N) * invert(euler)
print("parts 1,4 mod 5:", mod5.q_coeffs()[:15])
print("first identity holds to q^%d:" % N, gaps.first_mismatch(mod5) is None)


# The second identity shifts the kernel by n and the residues to 2, 3 mod 5.

# In[6]:

lhs = eval_expr(parse_expr("sum(n>=0) { q^(n^2 + n) / poch(q; q; n) }"), N)
rhs = triple_product(1, 5, N) * invert(euler)
print("second identity holds:", lhs.first_mismatch(rhs) is None)


# A wrong kernel fails immediately, and the report says where.

# In[7]:

bad = eval_expr(parse_expr("sum(n>=0) { q^(n^2 + 1) / poch(q; q; n) }"), N)
print("perturbed kernel first differs at", bad.first_mismatch(mod5))
