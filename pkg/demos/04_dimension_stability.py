"""How often does one of a session's opening top-3 dimensions stay in the top 3?"""
# %%
from dimrel import GeneratorConfig, generate, stability_analysis

base = dict(seed=3, n_sessions=200, queries_per_session=(3, 6), concentration=5.0,
            click_noise=0.05, clicks_per_query=2)
steady, _ = generate(GeneratorConfig(**base))
shifting, _ = generate(GeneratorConfig(redraw_per_query=True, **base))

for name, corpus in [("steady", steady), ("shifting", shifting)]:
    for k in (1, 2, 3, 7):
        r = stability_analysis(corpus, k)
        print(f"{name:9s} top-{k}: {r.fraction_stable:.3f} ({r.n_stable}/{r.n_eligible})")
