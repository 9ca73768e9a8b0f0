def firstPositive(n: list[int], i: int) -> int:
    if i >= 0 and i < len(n) and n[i] > 0:
        return n[i]
    return 0
