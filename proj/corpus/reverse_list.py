def reverseList(n: list[int]) -> list[int]:
    out = []
    i = len(n) - 1
    while i >= 0:
        out.append(n[i])
        i = i - 1
    return out
