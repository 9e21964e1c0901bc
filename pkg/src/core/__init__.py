"""Core components of the NANIP toolkit: graphs, cost model, solvers and orchestration."""