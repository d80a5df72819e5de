"""NDCG tables on synthetic sessions with planted preferences.

Within-session: weights from query i re-rank query i+1.
Cross-session: weights from one session's last query re-rank the next
session's last query.
"""
# %%
from dimrel import GeneratorConfig, evaluate_strategies, generate

sessions, truth = generate(GeneratorConfig(seed=1, n_sessions=200, queries_per_session=(5, 10),
                                           concentration=2.0, click_noise=0.05))
print(evaluate_strategies(sessions).to_table())

# %% a population sharing one preference, last query of each session only.
# A single SAT click is a noisy estimate of the preference, so the population's
# dominant dimension can still beat the carried weights at deeper cutoffs.
shared = (0.05, 0.45, 0.05, 0.3, 0.05, 0.05, 0.05)
sessions, _ = generate(GeneratorConfig(seed=2, n_sessions=300, queries_per_session=(1, 4),
                                       planted_weights=shared, click_noise=0.05))
print(evaluate_strategies(sessions, protocol="cross-session").to_table())
