def lastElement(n: list[int]) -> int:
    if len(n) > 0:
        return n[-1]
    return 0
