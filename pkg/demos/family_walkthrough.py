"""
A three-parameter family of Rogers-Ramanujan type
=================================================

Each triple (d, e, k) gives K = k + d(e - 1) bivariate series Q_1(a) ... Q_K(a).
"""

# In[1]:

from qbailey.bailey import (
    FamilyParams,
    beta_from_alpha,
    check_family,
    derive_family,
    product_label,
    q_direct,
    q_lemma_form,
    qdiff_residuals,
)

p = FamilyParams(1, 2, 4)
print(p, "K =", p.K, "modulus =", p.modulus)


# The Bailey pair behind the family. beta_n is summed from the alpha side;
# it is a rational function in a and q, expanded here to q^6.

# In[2]:

for n in range(3):
    print(f"beta_{n} =", beta_from_alpha(p, n, 6, 4).format())


# The last member comes out of the limiting Bailey lemma. Its direct sum
# and the lemma form are the same series.

# In[3]:

N, M = 30, 30
last = q_lemma_form(p, N, M)
print(last == q_direct(p, p.K, N, M))


# The q-difference system ties Q_i(a) to Q_j(aq). Its residuals vanish
# identically for the true family.

# In[4]:

print([r.is_zero() for r in qdiff_residuals(p, N, M)])


# Starting from the last member only, the system recovers the others.

# In[5]:

family = derive_family(p, last, N, M)
print(all(f == q_direct(p, i, N, M) for i, f in enumerate(family, start=1)))


# At a = 1 each member is an infinite product.

# In[6]:

for i in range(1, p.K + 1):
    print(f"Q_{i}(1) =", product_label(p, i))


# All of the above in one call, as the command line runs it.

# In[7]:

report = check_family(p, N, M)
for c in report.checks:
    print(c.name, "ok" if c.passed else "FAILED")
