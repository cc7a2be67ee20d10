/** Drag-and-drop snapshot intake; returns parsed JSON or null. */

export function installDropZone(zone: HTMLElement, onFile: (file: File) => void): () => void {
  const onDragOver = (event: DragEvent) => {
    event.preventDefault();
    zone.classList.add("dragging");
  };
  const onDragLeave = () => zone.classList.remove("dragging");
  const onDrop = (event: DragEvent) => {
    event.preventDefault();
    zone.classList.remove("dragging");
    const file = event.dataTransfer?.files?.[0];
    if (file) onFile(file);
  };
  zone.addEventListener("dragover", onDragOver);
  zone.addEventListener("dragleave", onDragLeave);
  zone.addEventListener("drop", onDrop);
  return () => {
    zone.removeEventListener("dragover", onDragOver);
    zone.removeEventListener("dragleave", onDragLeave);
    zone.removeEventListener("drop", onDrop);
  };
}

export async function readSnapshotFile(file: File): Promise<unknown | null> {
  try {
    return JSON.parse(await file.text());
  } catch {
    return null;
  }
}
