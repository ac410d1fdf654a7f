/**
 * Three.js rendering of the layered box city: one mesh per scene box, black
 * connector lines, raycast picking for hover/click/double-click, optional
 * screenshot textures cropped per box via UV rectangles.
 */
import * as THREE from "three";
import type { NodePath, SceneDoc } from "./protocol.js";
import { CLICK_ENLARGE_FACTOR, samePath } from "./state.js";

export interface PickHandlers {
  onHover(path: NodePath | null, matchText: string | null): void;
  onClick(path: NodePath): void;
  onDoubleClick(path: NodePath): void;
}

export class CityRenderer {
  readonly scene3 = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private renderer: THREE.WebGLRenderer;
  private raycaster = new THREE.Raycaster();
  private pointer = new THREE.Vector2();
  private boxGroup = new THREE.Group();
  private lineGroup = new THREE.Group();
  private meshes: THREE.Mesh[] = [];
  private hovered: THREE.Mesh | null = null;
  private texture: THREE.Texture | null = null;

  constructor(
    private canvas: HTMLCanvasElement,
    private handlers: PickHandlers,
  ) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.camera = new THREE.PerspectiveCamera(
      55,
      canvas.clientWidth / Math.max(1, canvas.clientHeight),
      0.01,
      100,
    );
    this.camera.position.set(1.2, 3.0, 3.0);
    this.camera.lookAt(0.5, 1.0, 0.5);
    this.scene3.background = new THREE.Color(0x10131a);
    this.scene3.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.0);
    sun.position.set(2, 5, 3);
    this.scene3.add(sun);
    this.scene3.add(this.boxGroup);
    this.scene3.add(this.lineGroup);
    canvas.addEventListener("pointermove", (e) => this.trackPointer(e));
    canvas.addEventListener("click", () => this.pick(this.handlers.onClick));
    canvas.addEventListener("dblclick", () =>
      this.pick(this.handlers.onDoubleClick),
    );
    this.renderer.setAnimationLoop(() => this.frame());
  }

  /** Rebuild meshes from a scene document. */
  update(scene: SceneDoc, selected: NodePath | null): void {
    this.boxGroup.clear();
    this.lineGroup.clear();
    this.meshes = [];
    for (const box of scene.boxes) {
      const geometry = new THREE.BoxGeometry(...box.size);
      if (box.uv && this.texture) {
        remapTopFace(geometry, box.uv);
      }
      const material =
        box.uv && this.texture
          ? new THREE.MeshLambertMaterial({ map: this.texture })
          : new THREE.MeshLambertMaterial({
              color: new THREE.Color(...box.color),
            });
      const mesh = new THREE.Mesh(geometry, material);
      mesh.position.set(...box.pos);
      if (selected && samePath(box.path, selected)) {
        mesh.scale.setScalar(CLICK_ENLARGE_FACTOR);
      }
      mesh.userData.path = box.path;
      mesh.userData.matchText = box.match_text;
      this.boxGroup.add(mesh);
      this.meshes.push(mesh);
    }
    const lineMaterial = new THREE.LineBasicMaterial({ color: 0x000000 });
    for (const line of scene.lines) {
      const geometry = new THREE.BufferGeometry().setFromPoints([
        new THREE.Vector3(...line.a),
        new THREE.Vector3(...line.b),
      ]);
      this.lineGroup.add(new THREE.Line(geometry, lineMaterial));
    }
  }

  setScreenshot(texture: THREE.Texture | null): void {
    this.texture = texture;
  }

  resize(width: number, height: number): void {
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / Math.max(1, height);
    this.camera.updateProjectionMatrix();
  }

  private trackPointer(event: PointerEvent): void {
    const rect = this.canvas.getBoundingClientRect();
    this.pointer.x = ((event.clientX - rect.left) / rect.width) * 2 - 1;
    this.pointer.y = -((event.clientY - rect.top) / rect.height) * 2 + 1;
  }

  private pick(handler: (path: NodePath) => void): void {
    const hit = this.intersect();
    if (hit) handler(hit.userData.path as NodePath);
  }

  private intersect(): THREE.Mesh | null {
    this.raycaster.setFromCamera(this.pointer, this.camera);
    const hits = this.raycaster.intersectObjects(this.meshes, false);
    return hits.length ? (hits[0].object as THREE.Mesh) : null;
  }

  private frame(): void {
    const hit = this.intersect();
    if (hit !== this.hovered) {
      this.hovered = hit;
      this.handlers.onHover(
        hit ? (hit.userData.path as NodePath) : null,
        hit ? (hit.userData.matchText as string) : null,
      );
    }
    this.renderer.render(this.scene3, this.camera);
  }
}

/** Crop the screenshot to the box footprint on the box's top face. */
function remapTopFace(
  geometry: THREE.BoxGeometry,
  uv: [number, number, number, number],
): void {
  const [u0, v0, u1, v1] = uv;
  const attr = geometry.getAttribute("uv") as THREE.BufferAttribute;
  // BoxGeometry face order: +x, -x, +y (top), -y, +z, -z; 4 vertices each
  const top = 2 * 4;
  const corners: Array<[number, number]> = [
    [u0, v1],
    [u1, v1],
    [u0, v0],
    [u1, v0],
  ];
  corners.forEach(([u, v], i) => attr.setXY(top + i, u, v));
  attr.needsUpdate = true;
}
