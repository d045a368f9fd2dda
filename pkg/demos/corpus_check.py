"""
Checking the shipped identity corpus
====================================

"""

# In[1]:

import time

from qbailey import corpus
from qbailey.dsl import format_doc, verify, verify_bailey

docs = corpus.identities()
print(len(docs), "identities,", len(corpus.bailey_forms()), "closed-form Bailey pairs")


# One document, as written in the corpus files.

# In[2]:

print(format_doc(docs[0]))


# Verify everything at q^50. Bivariate documents are also expanded in a.

# In[3]:

t0 = time.perf_counter()
reports = [verify(d, 50, 30) for d in docs]
print(sum(r.passed for r in reports), "/", len(reports), "equal",
      "in %.2fs" % (time.perf_counter() - t0))
for r in reports[:5]:
    print(" ", r.summary())


# Closed forms for beta_n against the sum over alpha.

# In[4]:

for doc in corpus.bailey_forms():
    print(verify_bailey(doc, 6, 20, 20).summary())
