"""NANIP solver toolkit root package."""