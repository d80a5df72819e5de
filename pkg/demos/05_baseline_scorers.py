"""Scoring raw documents with the baseline per-dimension scorers."""
# %%
import numpy as np

from dimrel import DIMENSIONS, DocumentRecord, UserProfile, build_score_matrix, capture_weights

docs = [
    DocumentRecord("gov", url_host="travel.gov", length_tokens=900, publish_rank=2,
                   body_text="Visa requirements for Japan. Apply at the embassy. Bring your passport."),
    DocumentRecord("blog", url_host="wanderlust.blog", length_tokens=2400, publish_rank=0,
                   body_text="I spent three glorious weeks wandering around Japan and honestly the visa "
                             "process, which I had been dreading for months, turned out to be painless."),
    DocumentRecord("forum", url_host="askfellows.net", length_tokens=300, publish_rank=1,
                   body_text="Anyone know if a visa is needed? Thanks."),
]
profile = UserProfile(
    host_click_counts={"travel.gov": 7, "askfellows.net": 1},
    interest_terms={"japan": 1.0, "visa": 0.5},
    trusted_hosts={"travel.gov"},
)
matrix = build_score_matrix("visa-japan", ["japan", "visa", "requirements"], docs, profile)
print("        " + " ".join(f"{d.value[:6]:>7s}" for d in DIMENSIONS))
for doc_id, row in zip(matrix.doc_ids, matrix.raw):
    print(f"{doc_id:7s} " + " ".join(f"{x:7.3f}" for x in row))

# %%
w = capture_weights(matrix, {"gov"})
print({d.value: round(w[d], 3) for d in DIMENSIONS})
